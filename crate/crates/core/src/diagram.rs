//! Diagrams on `[n]` and the structure-family predicates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An arc `(i, j)` with `1 <= i < j <= n`. Serialized as `[i, j]`.
pub type Arc = (u32, u32);

/// `n` labelled vertices on a line together with a set of arcs.
///
/// Arcs are kept sorted lexicographically, so two diagrams are equal exactly
/// when their arc sets are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct Diagram {
    n: u32,
    arcs: Vec<Arc>,
}

#[derive(Deserialize)]
struct RawDiagram {
    n: u32,
    arcs: Vec<Arc>,
}

impl TryFrom<RawDiagram> for Diagram {
    type Error = Error;

    fn try_from(raw: RawDiagram) -> Result<Self> {
        Diagram::new(raw.n, raw.arcs)
    }
}

impl Diagram {
    /// Validates the arcs and returns the diagram in canonical form.
    pub fn new(n: u32, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDiagram("vertex count must be positive".into()));
        }
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        for &(i, j) in &arcs {
            if i >= j {
                return Err(Error::InvalidDiagram(format!("arc ({i},{j}) has i >= j")));
            }
            if i < 1 || j > n {
                return Err(Error::InvalidDiagram(format!(
                    "arc ({i},{j}) leaves the vertex range [1,{n}]"
                )));
            }
        }
        arcs.sort_unstable();
        if let Some(w) = arcs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDiagram(format!(
                "duplicate arc ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Diagram { n, arcs })
    }

    /// The diagram on `n` vertices without arcs.
    pub fn empty(n: u32) -> Result<Self> {
        Diagram::new(n, [])
    }

    /// Trusted constructor for arcs already known to be valid and sorted.
    pub(crate) fn from_sorted_unchecked(n: u32, arcs: Vec<Arc>) -> Self {
        debug_assert!(arcs.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(arcs.iter().all(|&(i, j)| 1 <= i && i < j && j <= n));
        Diagram { n, arcs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, arc: Arc) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.arcs.iter().filter(|&&(i, j)| i == v || j == v).count() as u32
    }

    /// Degrees indexed by vertex; index 0 is unused.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n as usize + 1];
        for &(i, j) in &self.arcs {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }

    pub fn isolated_vertices(&self) -> Vec<u32> {
        let deg = self.degrees();
        (1..=self.n).filter(|&v| deg[v as usize] == 0).collect()
    }

    /// Mirror image under `v -> n + 1 - v`.
    pub fn reflect(&self) -> Diagram {
        let n = self.n;
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|&(i, j)| (n + 1 - j, n + 1 - i))
            .collect();
        arcs.sort_unstable();
        Diagram { n, arcs }
    }

    /// Restriction to the vertices strictly between `lo` and `hi`, relabelled
    /// to start at 1. Arcs with an endpoint outside the window are dropped.
    pub fn window(&self, lo: u32, hi: u32) -> Option<Diagram> {
        if hi <= lo + 1 {
            return None;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(i, j)| i > lo && j < hi)
            .map(|&(i, j)| (i - lo, j - lo))
            .collect();
        Some(Diagram::from_sorted_unchecked(hi - lo - 1, arcs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serialization is infallible")
    }

    pub fn from_json(text: &str) -> std::result::Result<Diagram, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.n)?;
        for (idx, (i, j)) in self.arcs.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "]")
    }
}

/// Arc-length minimum plus degree caps; fixes a structure family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintProfile {
    pub m: u32,
    pub terminal_cap: u32,
    pub internal_cap: u32,
}

impl ConstraintProfile {
    pub fn new(m: u32, terminal_cap: u32, internal_cap: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidProfile("minimum arc length must be >= 1".into()));
        }
        for cap in [terminal_cap, internal_cap] {
            if !(1..=2).contains(&cap) {
                return Err(Error::InvalidProfile(format!("degree cap {cap} not in {{1,2}}")));
            }
        }
        Ok(ConstraintProfile {
            m,
            terminal_cap,
            internal_cap,
        })
    }

    /// m-regular simple stacks: every vertex has degree at most one.
    pub fn plain(m: u32) -> Self {
        ConstraintProfile::new(m, 1, 1).expect("valid plain profile")
    }

    /// Extended m-regular simple stacks: terminals may have degree two.
    pub fn extended(m: u32) -> Self {
        ConstraintProfile::new(m, 2, 1).expect("valid extended profile")
    }

    pub fn is_extended(&self) -> bool {
        self.terminal_cap == 2 && self.internal_cap == 1
    }

    pub fn cap(&self, n: u32, v: u32) -> u32 {
        if v == 1 || v == n {
            self.terminal_cap
        } else {
            self.internal_cap
        }
    }
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub noncrossing: bool,
    pub m_regular: bool,
    pub degree_ok: bool,
}

impl ClassifyReport {
    pub fn satisfies(&self) -> bool {
        self.noncrossing && self.m_regular && self.degree_ok
    }
}

/// Two arcs cross iff `i < k < j < l`; arcs sharing an endpoint never cross.
#[inline]
pub fn crosses(a: Arc, b: Arc) -> bool {
    let ((i, j), (k, l)) = if a <= b { (a, b) } else { (b, a) };
    i < k && k < j && j < l
}

pub fn classify(d: &Diagram, p: &ConstraintProfile) -> ClassifyReport {
    let arcs = d.arcs();
    let noncrossing = arcs
        .iter()
        .enumerate()
        .all(|(x, &a)| arcs[x + 1..].iter().all(|&b| !crosses(a, b)));
    let m_regular = arcs.iter().all(|&(i, j)| j - i >= p.m);
    let deg = d.degrees();
    let degree_ok = (1..=d.n()).all(|v| deg[v as usize] <= p.cap(d.n(), v));
    ClassifyReport {
        noncrossing,
        m_regular,
        degree_ok,
    }
}

fn require_profile(d: &Diagram, p: &ConstraintProfile) -> Result<()> {
    let report = classify(d, p);
    if report.satisfies() {
        Ok(())
    } else {
        Err(Error::ProfileViolation(format!("{d}: {report:?}")))
    }
}

/// Every arc that can be added to `d` while keeping it inside profile `p`.
pub fn addable_arcs(d: &Diagram, p: &ConstraintProfile) -> Result<Vec<Arc>> {
    require_profile(d, p)?;
    let n = d.n();
    let deg = d.degrees();
    let mut out = Vec::new();
    for i in 1..=n {
        if deg[i as usize] >= p.cap(n, i) {
            continue;
        }
        for j in (i + p.m)..=n {
            if deg[j as usize] >= p.cap(n, j) || d.has_arc((i, j)) {
                continue;
            }
            if d.arcs().iter().all(|&a| !crosses(a, (i, j))) {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

pub fn is_saturated(d: &Diagram, p: &ConstraintProfile) -> Result<bool> {
    Ok(addable_arcs(d, p)?.is_empty())
}

/// Vertices not weakly covered by any arc: `v` is hidden by `(i, j)` when
/// `i <= v <= j`.
pub fn visible_vertices(d: &Diagram) -> Vec<u32> {
    (1..=d.n())
        .filter(|&v| !d.arcs().iter().any(|&(i, j)| i <= v && v <= j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> Diagram {
        Diagram::new(21, [(1, 13), (2, 11), (3, 6), (7, 9), (14, 21), (17, 20)]).unwrap()
    }

    #[test]
    fn construction_and_canonical_order() {
        let d = Diagram::new(5, []).unwrap();
        assert_eq!(d.arc_count(), 0);
        let d = Diagram::new(6, [(2, 4), (1, 6)]).unwrap();
        assert_eq!(d.arcs(), &[(1, 6), (2, 4)]);
        assert_eq!(fig2().arc_count(), 6);
    }

    #[test]
    fn construction_errors() {
        assert!(Diagram::new(4, [(3, 2)]).is_err());
        assert!(Diagram::new(4, [(2, 2)]).is_err());
        assert!(Diagram::new(4, [(1, 5)]).is_err());
        assert!(Diagram::new(4, [(0, 2)]).is_err());
        assert!(Diagram::new(4, [(1, 3), (1, 3)]).is_err());
        assert!(Diagram::new(0, []).is_err());
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let d = fig2();
        let text = d.to_json();
        assert_eq!(
            text,
            r#"{"n":21,"arcs":[[1,13],[2,11],[3,6],[7,9],[14,21],[17,20]]}"#
        );
        assert_eq!(Diagram::from_json(&text).unwrap(), d);
        assert!(Diagram::from_json(r#"{"n":4,"arcs":[[3,2]]}"#).is_err());
        // unsorted input is canonicalized
        let d = Diagram::from_json(r#"{"n":6,"arcs":[[2,4],[1,6]]}"#).unwrap();
        assert_eq!(d.arcs(), &[(1, 6), (2, 4)]);
    }

    #[test]
    fn classify_examples() {
        let plain = ConstraintProfile::plain(2);
        assert!(classify(&fig2(), &plain).satisfies());
        let empty = Diagram::empty(7).unwrap();
        for p in [plain, ConstraintProfile::extended(5)] {
            assert!(classify(&empty, &p).satisfies());
        }
        let crossing = Diagram::new(4, [(1, 3), (2, 4)]).unwrap();
        assert!(!classify(&crossing, &plain).noncrossing);
        let short = Diagram::new(4, [(1, 2)]).unwrap();
        let r = classify(&short, &plain);
        assert!(r.noncrossing && !r.m_regular && r.degree_ok);
        let shared = Diagram::new(5, [(1, 3), (1, 5)]).unwrap();
        let r = classify(&shared, &plain);
        assert!(r.noncrossing && !r.degree_ok);
        assert!(classify(&shared, &ConstraintProfile::extended(2)).satisfies());
    }

    #[test]
    fn profile_validation() {
        assert!(ConstraintProfile::new(0, 1, 1).is_err());
        assert!(ConstraintProfile::new(2, 3, 1).is_err());
        assert!(ConstraintProfile::new(2, 1, 0).is_err());
        assert!(ConstraintProfile::extended(2).is_extended());
        assert!(!ConstraintProfile::plain(2).is_extended());
    }

    #[test]
    fn addable_examples() {
        let p = ConstraintProfile::plain(2);
        let d = Diagram::new(5, [(1, 5)]).unwrap();
        assert_eq!(addable_arcs(&d, &p).unwrap(), vec![(2, 4)]);
        assert!(!is_saturated(&d, &p).unwrap());
        let d = Diagram::new(5, [(1, 3)]).unwrap();
        assert!(addable_arcs(&d, &p).unwrap().is_empty());
        let d = Diagram::empty(1).unwrap();
        assert!(addable_arcs(&d, &p).unwrap().is_empty());
        assert!(is_saturated(&fig2(), &p).unwrap());
        let d = Diagram::new(6, [(1, 6), (1, 5), (2, 4)]).unwrap();
        assert!(is_saturated(&d, &ConstraintProfile::extended(2)).unwrap());
        let bad = Diagram::new(4, [(1, 3), (2, 4)]).unwrap();
        assert!(matches!(addable_arcs(&bad, &p), Err(Error::ProfileViolation(_))));
    }

    #[test]
    fn visible_examples() {
        let d = Diagram::new(5, [(1, 5), (2, 4)]).unwrap();
        assert!(visible_vertices(&d).is_empty());
        assert_eq!(visible_vertices(&Diagram::empty(3).unwrap()), vec![1, 2, 3]);
        let d = Diagram::new(7, [(2, 4)]).unwrap();
        assert_eq!(visible_vertices(&d), vec![1, 5, 6, 7]);
    }

    #[test]
    fn reflection_and_window() {
        let d = Diagram::new(6, [(1, 6), (1, 5), (2, 4)]).unwrap();
        assert_eq!(d.reflect().arcs(), &[(1, 6), (2, 6), (3, 5)]);
        assert_eq!(d.reflect().reflect(), d);
        let w = d.window(1, 5).unwrap();
        assert_eq!((w.n(), w.arcs()), (3, &[(1, 3)][..]));
        assert!(d.window(5, 6).is_none());
    }
}
