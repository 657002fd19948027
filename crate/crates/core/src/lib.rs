//! Exact enumeration of saturated (extended) m-regular simple stacks.
//!
//! A *diagram* on `[n]` is a set of arcs `(i, j)` with `i < j`; a *stack* is a
//! noncrossing diagram. This crate provides
//!
//! - structure-family predicates and the primary-component taxonomy of
//!   saturated extended 2-regular simple stacks ([`diagram`], [`primary`]),
//! - an exhaustive backtracking oracle that generates every diagram of a
//!   family at small `n` ([`oracle`]),
//! - the stack / linear-tree / small-forest bijections and the semi-bijective
//!   labelling algorithms built on them ([`tree`], [`forest`], [`stf`]),
//! - exact evaluation of every closed-form count over big integers and
//!   rationals ([`combinat`], [`series`], [`formulas`]),
//! - table assembly with per-cell provenance ([`table`]) and the cross-check
//!   suites driven by the command-line tool ([`verify`]).
//!
//! The algebraic layer is generic over its scalar: [`combinat`] works for any
//! signed integer type and [`series::BivariateSeries`] for any commutative
//! ring from `num-traits`. The counting code instantiates them with the
//! aliases below.

pub mod combinat;
pub mod diagram;
pub mod error;
pub mod forest;
pub mod formulas;
pub mod oracle;
pub mod primary;
pub mod series;
pub mod stf;
pub mod table;
pub mod tree;
pub mod verify;

/// Arbitrary-precision integer used for every count.
pub type ExactInt = num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactRat = num_rational::BigRational;
/// Truncated bivariate series with exact integer coefficients.
pub type IntSeries = series::BivariateSeries<ExactInt>;
/// Truncated bivariate series with exact rational coefficients.
pub type RatSeries = series::BivariateSeries<ExactRat>;

pub use diagram::{Arc, ClassifyReport, ConstraintProfile, Diagram};
pub use error::{Error, Result};
pub use forest::{ForestLabel, SmallForest, SmallTree};
pub use primary::{PrimaryClass, PrimaryComponent, SubstructureType};
pub use tree::LinearTree;
