//! Primary components of saturated extended 2-regular simple stacks.
//!
//! The primary component is the union of the connected components holding
//! the terminal vertices `1` and `n`. Interior vertices have degree at most
//! one, so it consists exactly of the arcs incident to a terminal. Its shape
//! falls into one of nine classes (six up to reflection), and it cuts `[n]`
//! into intervals whose substructures have a fixed type per class.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::diagram::{is_saturated, visible_vertices, Arc, ConstraintProfile, Diagram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimaryClass {
    A1,
    A1Mirror,
    A2,
    A2Mirror,
    A3,
    A3Mirror,
    A4,
    A5,
    A6,
}

/// What the eSTF preprocessing does to a terminal vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalSurgery {
    /// Degree 0: the vertex is removed.
    Deleted,
    /// Degree 1: untouched.
    Kept,
    /// Degree 2: a new vertex is inserted to its left and takes one arc.
    Split,
}

impl PrimaryClass {
    pub const ALL: [PrimaryClass; 9] = [
        PrimaryClass::A1,
        PrimaryClass::A1Mirror,
        PrimaryClass::A2,
        PrimaryClass::A2Mirror,
        PrimaryClass::A3,
        PrimaryClass::A3Mirror,
        PrimaryClass::A4,
        PrimaryClass::A5,
        PrimaryClass::A6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrimaryClass::A1 => "A1",
            PrimaryClass::A1Mirror => "A1'",
            PrimaryClass::A2 => "A2",
            PrimaryClass::A2Mirror => "A2'",
            PrimaryClass::A3 => "A3",
            PrimaryClass::A3Mirror => "A3'",
            PrimaryClass::A4 => "A4",
            PrimaryClass::A5 => "A5",
            PrimaryClass::A6 => "A6",
        }
    }

    pub fn mirror(self) -> PrimaryClass {
        use PrimaryClass::*;
        match self {
            A1 => A1Mirror,
            A1Mirror => A1,
            A2 => A2Mirror,
            A2Mirror => A2,
            A3 => A3Mirror,
            A3Mirror => A3,
            other => other,
        }
    }

    /// Index `i` of the unprimed type `A_i` (1..=6).
    pub fn family_index(self) -> usize {
        use PrimaryClass::*;
        match self {
            A1 | A1Mirror => 1,
            A2 | A2Mirror => 2,
            A3 | A3Mirror => 3,
            A4 => 4,
            A5 => 5,
            A6 => 6,
        }
    }

    /// Number of arcs in the primary component.
    pub fn k1(self) -> u32 {
        use PrimaryClass::*;
        match self {
            A4 => 1,
            A1 | A1Mirror | A2 | A2Mirror => 2,
            A3 | A3Mirror | A5 => 3,
            A6 => 4,
        }
    }

    /// `(deg 1 - 1) + (deg n - 1)`.
    pub fn d(self) -> i32 {
        use PrimaryClass::*;
        match self {
            A1 | A1Mirror | A4 => 0,
            A2 | A2Mirror | A3 | A3Mirror => 1,
            A5 | A6 => 2,
        }
    }

    /// `(deg 1, deg n)` for this class.
    pub fn terminal_degrees(self) -> (u32, u32) {
        use PrimaryClass::*;
        match self {
            A1 => (2, 0),
            A1Mirror => (0, 2),
            A2 | A3 => (2, 1),
            A2Mirror | A3Mirror => (1, 2),
            A4 => (1, 1),
            A5 | A6 => (2, 2),
        }
    }

    pub fn surgery(self) -> (TerminalSurgery, TerminalSurgery) {
        let op = |deg| match deg {
            0 => TerminalSurgery::Deleted,
            1 => TerminalSurgery::Kept,
            _ => TerminalSurgery::Split,
        };
        let (l, r) = self.terminal_degrees();
        (op(l), op(r))
    }

    pub fn parse(name: &str) -> Option<PrimaryClass> {
        PrimaryClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for PrimaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PrimaryClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Classified primary component of a saturated extended stack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimaryComponent {
    pub class: PrimaryClass,
    /// Arcs incident to vertex 1 or n, in lexicographic order.
    pub arcs: Vec<Arc>,
    pub k1: u32,
    pub d: i32,
}

fn require_saturated_extended(d: &Diagram) -> Result<()> {
    let profile = ConstraintProfile::extended(2);
    match is_saturated(d, &profile) {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::NotSaturatedExtended(format!("{d}: arcs can still be added"))),
        Err(e) => Err(Error::NotSaturatedExtended(e.to_string())),
    }
}

/// Classification from terminal degrees alone; the caller vouches for
/// saturation.
pub(crate) fn classify_terminals(d: &Diagram) -> Result<PrimaryComponent> {
    let n = d.n();
    let arcs: Vec<Arc> = d
        .arcs()
        .iter()
        .copied()
        .filter(|&(i, j)| i == 1 || j == n)
        .collect();
    let deg1 = d.degree(1);
    let degn = d.degree(n);
    let spans = d.has_arc((1, n));
    use PrimaryClass::*;
    let class = match (deg1, degn, spans) {
        (2, 0, _) => A1,
        (0, 2, _) => A1Mirror,
        (2, 1, true) => A2,
        (1, 2, true) => A2Mirror,
        (2, 1, false) => A3,
        (1, 2, false) => A3Mirror,
        (1, 1, true) => A4,
        (2, 2, true) => A5,
        (2, 2, false) => A6,
        _ => {
            return Err(Error::Unclassifiable(format!(
                "{d}: terminal degrees ({deg1},{degn}), arc (1,n) present: {spans}"
            )))
        }
    };
    let k1 = arcs.len() as u32;
    debug_assert_eq!(k1, class.k1());
    Ok(PrimaryComponent {
        class,
        arcs,
        k1,
        d: deg1 as i32 + degn as i32 - 2,
    })
}

pub fn primary_component(d: &Diagram) -> Result<PrimaryComponent> {
    require_saturated_extended(d)?;
    classify_terminals(d)
}

/// Interval substructure types. `T` is a nonempty saturated 2-regular simple
/// stack, `T^` such a stack without visible vertices, `.` a lone vertex and
/// `e` the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubstructureType {
    /// `T + e`
    T1,
    /// `T`
    T2,
    /// `T^ + e`
    T3,
    /// `T^`
    T4,
    /// `T^ + .`
    T5,
    /// `T^. + . + T^ + e`
    T6,
    /// `T6` reversed.
    T6Mirror,
    /// `T^. + . + T^`
    T7,
    /// `T7` reversed.
    T7Mirror,
}

impl SubstructureType {
    pub fn name(self) -> &'static str {
        use SubstructureType::*;
        match self {
            T1 => "T1",
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T6 => "T6",
            T6Mirror => "T6'",
            T7 => "T7",
            T7Mirror => "T7'",
        }
    }

    /// Whether `piece` (`None` for an empty interval) has this type.
    pub fn admits(self, piece: Option<&Diagram>) -> bool {
        use SubstructureType::*;
        match self {
            T1 => piece.is_none_or(is_t),
            T2 => piece.is_some_and(is_t),
            T3 => piece.is_none_or(is_t_hat),
            T4 => piece.is_some_and(is_t_hat),
            T5 => piece.is_some_and(|p| is_t_hat(p) || is_lone_vertex(p)),
            T6 => T3.admits(piece) || piece.is_some_and(t3_then_vertex),
            T6Mirror => T3.admits(piece) || piece.is_some_and(|p| t3_then_vertex(&p.reflect())),
            T7 => T4.admits(piece) || piece.is_some_and(t3_then_vertex),
            T7Mirror => T4.admits(piece) || piece.is_some_and(|p| t3_then_vertex(&p.reflect())),
        }
    }
}

impl fmt::Display for SubstructureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SubstructureType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn is_t(p: &Diagram) -> bool {
    is_saturated(p, &ConstraintProfile::plain(2)).unwrap_or(false)
}

fn is_t_hat(p: &Diagram) -> bool {
    is_t(p) && visible_vertices(p).is_empty()
}

fn is_lone_vertex(p: &Diagram) -> bool {
    p.n() == 1 && p.arc_count() == 0
}

/// `T3` followed by one isolated vertex.
fn t3_then_vertex(p: &Diagram) -> bool {
    let n = p.n();
    p.degree(n) == 0 && SubstructureType::T3.admits(p.window(0, n).as_ref())
}

/// An open interval `<lo, hi>` of the vertex line and its substructure type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedInterval {
    pub lo: u32,
    pub hi: u32,
    #[serde(rename = "type")]
    pub ty: SubstructureType,
}

/// Cuts `[n]` at the endpoints of the primary component and types each
/// interval according to the class of the primary component.
pub fn split_and_classify_intervals(d: &Diagram) -> Result<Vec<ClassifiedInterval>> {
    let pc = primary_component(d)?;
    let n = d.n();
    let left: Vec<u32> = pc.arcs.iter().filter(|a| a.0 == 1).map(|a| a.1).collect();
    let right: Vec<u32> = pc.arcs.iter().filter(|a| a.1 == n).map(|a| a.0).collect();
    use PrimaryClass::*;
    use SubstructureType::*;
    // left[] ascending right endpoints of arcs at 1; right[] ascending left
    // endpoints of arcs at n (both include (1,n) when present).
    let cuts: Vec<(u32, u32, SubstructureType)> = match pc.class {
        A1 => vec![(1, left[0], T2), (left[0], left[1], T1), (left[1], n, T6)],
        A1Mirror => vec![(1, right[0], T6Mirror), (right[0], right[1], T1), (right[1], n, T2)],
        A2 => vec![(1, left[0], T2), (left[0], n, T6)],
        A2Mirror => vec![(1, right[1], T6Mirror), (right[1], n, T2)],
        A3 => vec![
            (1, left[0], T2),
            (left[0], left[1], T1),
            (left[1], right[0], T3),
            (right[0], n, T7),
        ],
        A3Mirror => vec![
            (1, left[0], T7Mirror),
            (left[0], right[0], T3),
            (right[0], right[1], T1),
            (right[1], n, T2),
        ],
        A4 => vec![(1, n, T5)],
        A5 => vec![(1, left[0], T2), (left[0], right[1], T1), (right[1], n, T2)],
        A6 => vec![
            (1, left[0], T2),
            (left[0], left[1], T1),
            (left[1], right[0], T1),
            (right[0], right[1], T1),
            (right[1], n, T2),
        ],
    };
    cuts.into_iter()
        .map(|(lo, hi, ty)| {
            let piece = d.window(lo, hi);
            if ty.admits(piece.as_ref()) {
                Ok(ClassifiedInterval { lo, hi, ty })
            } else {
                Err(Error::Unclassifiable(format!(
                    "{d}: interval <{lo},{hi}> of class {} is not of type {ty}",
                    pc.class
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(n: u32, arcs: &[Arc]) -> Diagram {
        Diagram::new(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn primary_examples() {
        let pc = primary_component(&dg(6, &[(1, 6), (1, 5), (2, 4)])).unwrap();
        assert_eq!(pc.class, PrimaryClass::A2);
        assert_eq!(pc.arcs, vec![(1, 5), (1, 6)]);
        assert_eq!((pc.k1, pc.d), (2, 1));

        let pc = primary_component(&dg(6, &[(1, 3), (1, 6), (4, 6)])).unwrap();
        assert_eq!((pc.class, pc.k1, pc.d), (PrimaryClass::A5, 3, 2));

        let fig5 = dg(21, &[(1, 12), (1, 10), (2, 5), (6, 8), (13, 20), (16, 19)]);
        let pc = primary_component(&fig5).unwrap();
        assert_eq!((pc.class, pc.k1, pc.d), (PrimaryClass::A1, 2, 0));
    }

    #[test]
    fn primary_rejects_unsaturated() {
        let err = primary_component(&dg(6, &[(1, 6)])).unwrap_err();
        assert!(matches!(err, Error::NotSaturatedExtended(_)));
        // (1,1) without the spanning arc is never saturated
        assert!(primary_component(&dg(7, &[(1, 3), (5, 7)])).is_err());
    }

    #[test]
    fn classes_metadata_consistent() {
        for c in PrimaryClass::ALL {
            let (l, r) = c.terminal_degrees();
            assert_eq!(l as i32 + r as i32 - 2, c.d());
            assert_eq!(c.mirror().mirror(), c);
            assert_eq!(c.mirror().k1(), c.k1());
            assert_eq!(PrimaryClass::parse(c.name()), Some(c));
        }
    }

    #[test]
    fn interval_examples() {
        use SubstructureType::*;
        let fig5 = dg(21, &[(1, 12), (1, 10), (2, 5), (6, 8), (13, 20), (16, 19)]);
        let types: Vec<_> = split_and_classify_intervals(&fig5)
            .unwrap()
            .into_iter()
            .map(|c| c.ty)
            .collect();
        assert_eq!(types, vec![T2, T1, T6]);

        let ivs = split_and_classify_intervals(&dg(6, &[(1, 6), (1, 5), (2, 4)])).unwrap();
        assert_eq!(
            ivs,
            vec![
                ClassifiedInterval { lo: 1, hi: 5, ty: T2 },
                ClassifiedInterval { lo: 5, hi: 6, ty: T6 },
            ]
        );

        let ivs = split_and_classify_intervals(&dg(5, &[(1, 5), (2, 4)])).unwrap();
        assert_eq!(ivs, vec![ClassifiedInterval { lo: 1, hi: 5, ty: T5 }]);
    }

    #[test]
    fn substructure_predicates() {
        use SubstructureType::*;
        let lone = dg(1, &[]);
        let hat = dg(3, &[(1, 3)]);
        let hat_dot = dg(4, &[(1, 3)]);
        let dot_hat = dg(4, &[(2, 4)]);
        let two = dg(2, &[]);
        assert!(T1.admits(None) && !T2.admits(None));
        assert!(T2.admits(Some(&lone)) && T2.admits(Some(&two)));
        assert!(!T3.admits(Some(&lone)) && T3.admits(Some(&hat)) && T3.admits(None));
        assert!(T4.admits(Some(&hat)) && !T4.admits(None));
        assert!(T5.admits(Some(&lone)) && T5.admits(Some(&hat)) && !T5.admits(Some(&two)));
        assert!(T6.admits(Some(&hat_dot)) && T6.admits(Some(&lone)) && T6.admits(None));
        assert!(!T6.admits(Some(&dot_hat)) && T6Mirror.admits(Some(&dot_hat)));
        assert!(!T7.admits(None) && T7.admits(Some(&lone)) && T7.admits(Some(&hat_dot)));
        assert!(T7Mirror.admits(Some(&dot_hat)) && !T7Mirror.admits(Some(&hat_dot)));
        // three isolated vertices are not saturated
        assert!(!T1.admits(Some(&dg(3, &[]))));
    }
}
