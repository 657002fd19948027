use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid constraint profile: {0}")]
    InvalidProfile(String),
    #[error("diagram violates the constraint profile: {0}")]
    ProfileViolation(String),
    #[error("not a saturated extended 2-regular simple stack: {0}")]
    NotSaturatedExtended(String),
    #[error("unclassifiable structure: {0}")]
    Unclassifiable(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("invalid labelling: {0}")]
    InvalidLabelling(String),
    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },
    #[error("non-integral value in {op}: {detail}")]
    NonIntegral { op: &'static str, detail: String },
    #[error("evaluation paths disagree for {op}: {detail}")]
    PathDisagreement { op: &'static str, detail: String },
}

static INTEGRALITY_FAILURES: AtomicU64 = AtomicU64::new(0);

/// Number of integrality assertions that have fired in this process.
pub fn integrality_failures() -> u64 {
    INTEGRALITY_FAILURES.load(Ordering::Relaxed)
}

pub(crate) fn non_integral(op: &'static str, detail: String) -> Error {
    INTEGRALITY_FAILURES.fetch_add(1, Ordering::Relaxed);
    Error::NonIntegral { op, detail }
}

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
