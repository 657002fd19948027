//! Ordered rooted trees and the stack/tree bijection.
//!
//! For a 2-regular simple stack on `[n]`, the intervals `[i, j]` of its arcs,
//! the singletons of its isolated vertices and the outer interval `[0, n+1]`
//! ordered by inclusion form a tree. Children are ordered by position on the
//! line. Arcs become internal vertices and isolated vertices become leaves,
//! so a stack with `k` arcs gives a tree with `n - k + 1` vertices of which
//! `k + 1` are internal.

use serde::{Deserialize, Serialize};

use crate::diagram::{classify, ConstraintProfile, Diagram};
use crate::error::{Error, Result};

/// Ordered rooted tree with an optional label per vertex. Serialized as
/// nested `{"label", "asterisk", "children"}` objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearTree {
    pub label: Option<u32>,
    #[serde(default)]
    pub asterisk: bool,
    #[serde(default)]
    pub children: Vec<LinearTree>,
}

impl LinearTree {
    pub fn leaf() -> Self {
        LinearTree {
            label: None,
            asterisk: false,
            children: Vec::new(),
        }
    }

    pub fn node(children: Vec<LinearTree>) -> Self {
        LinearTree {
            label: None,
            asterisk: false,
            children,
        }
    }

    pub fn labelled(label: u32, children: Vec<LinearTree>) -> Self {
        LinearTree {
            label: Some(label),
            asterisk: false,
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(LinearTree::vertex_count).sum::<usize>()
    }

    pub fn internal_count(&self) -> usize {
        if self.is_leaf() {
            0
        } else {
            1 + self.children.iter().map(LinearTree::internal_count).sum::<usize>()
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.vertex_count() - self.internal_count()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// Vertex references in preorder (parent before children, children left
    /// to right).
    pub fn preorder(&self) -> Vec<&LinearTree> {
        let mut out = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.children.iter().rev());
        }
        out
    }

    pub fn labels_preorder(&self) -> Vec<Option<u32>> {
        self.preorder().into_iter().map(|t| t.label).collect()
    }

    /// Same shape with every label and asterisk removed.
    pub fn unlabelled(&self) -> LinearTree {
        LinearTree::node(self.children.iter().map(LinearTree::unlabelled).collect())
    }

    /// Copy of the tree whose `p`-th vertex in preorder gets `labels[p]`.
    pub fn with_preorder_labels(&self, labels: &[u32]) -> Result<LinearTree> {
        let count = self.vertex_count();
        if labels.len() != count {
            return Err(Error::InvalidLabelling(format!(
                "{} labels for a tree with {count} vertices",
                labels.len()
            )));
        }
        let mut it = labels.iter().copied();
        Ok(self.relabel_with(&mut it))
    }

    fn relabel_with(&self, it: &mut impl Iterator<Item = u32>) -> LinearTree {
        let label = it.next();
        LinearTree {
            label,
            asterisk: false,
            children: self.children.iter().map(|c| c.relabel_with(it)).collect(),
        }
    }

    /// Checks that the labels are a permutation of `[N]`, `N` the vertex
    /// count, with no asterisks.
    pub fn check_permutation_labelling(&self) -> Result<()> {
        let labels = self.labels_preorder();
        let n = labels.len();
        let mut seen = vec![false; n + 1];
        for (pos, l) in labels.iter().enumerate() {
            match *l {
                Some(v) if (1..=n as u32).contains(&v) && !seen[v as usize] => seen[v as usize] = true,
                Some(v) => {
                    return Err(Error::InvalidLabelling(format!(
                        "label {v} at preorder position {pos} is repeated or outside [1,{n}]"
                    )))
                }
                None => {
                    return Err(Error::InvalidLabelling(format!(
                        "vertex at preorder position {pos} has no label"
                    )))
                }
            }
        }
        if self.preorder().iter().any(|t| t.asterisk) {
            return Err(Error::InvalidLabelling("labelled tree carries asterisks".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialization is infallible")
    }
}

/// Checks `d` is a 2-regular simple stack.
fn require_simple_stack(d: &Diagram) -> Result<()> {
    let report = classify(d, &ConstraintProfile::plain(2));
    if report.satisfies() {
        Ok(())
    } else {
        Err(Error::ProfileViolation(format!(
            "{d} is not a 2-regular simple stack: {report:?}"
        )))
    }
}

/// Partner of every vertex (0 for isolated vertices) of a simple diagram.
fn partners(d: &Diagram) -> Vec<u32> {
    let mut partner = vec![0u32; d.n() as usize + 2];
    for &(i, j) in d.arcs() {
        partner[i as usize] = j;
        partner[j as usize] = i;
    }
    partner
}

/// Intervals of the inclusion tree in preorder: `(0, n+1)` first, arcs as
/// `(i, j)` and isolated vertices as `(v, v)`.
pub fn hasse_intervals(d: &Diagram) -> Result<Vec<(u32, u32)>> {
    require_simple_stack(d)?;
    let partner = partners(d);
    let mut out = vec![(0, d.n() + 1)];
    fn visit(lo: u32, hi: u32, partner: &[u32], out: &mut Vec<(u32, u32)>) {
        let mut v = lo + 1;
        while v < hi {
            let w = partner[v as usize];
            if w > v {
                out.push((v, w));
                visit(v, w, partner, out);
                v = w + 1;
            } else {
                out.push((v, v));
                v += 1;
            }
        }
    }
    visit(0, d.n() + 1, &partner, &mut out);
    Ok(out)
}

/// Unlabelled inclusion tree of a 2-regular simple stack.
pub fn phi(d: &Diagram) -> Result<LinearTree> {
    require_simple_stack(d)?;
    let partner = partners(d);
    fn build(lo: u32, hi: u32, partner: &[u32]) -> LinearTree {
        let mut children = Vec::new();
        let mut v = lo + 1;
        while v < hi {
            let w = partner[v as usize];
            if w > v {
                children.push(build(v, w, partner));
                v = w + 1;
            } else {
                children.push(LinearTree::leaf());
                v += 1;
            }
        }
        LinearTree::node(children)
    }
    Ok(build(0, d.n() + 1, &partner))
}

/// Inverse of [`phi`]: reads the stack on `[n]` back off the tree.
pub fn phi_inv(t: &LinearTree, n: u32) -> Result<Diagram> {
    if t.is_leaf() {
        return Err(Error::InvalidTree("the root must have children".into()));
    }
    let leaves = t.leaf_count() as u32;
    let arcs_needed = t.internal_count() as u32 - 1;
    if leaves + 2 * arcs_needed != n {
        return Err(Error::InvalidTree(format!(
            "a tree with {leaves} leaves and {} internal vertices encodes {} vertices, not {n}",
            arcs_needed + 1,
            leaves + 2 * arcs_needed
        )));
    }
    let mut arcs = Vec::with_capacity(arcs_needed as usize);
    let mut pos = 1u32;
    fn walk(t: &LinearTree, pos: &mut u32, arcs: &mut Vec<(u32, u32)>) {
        for c in &t.children {
            if c.is_leaf() {
                *pos += 1;
            } else {
                let i = *pos;
                *pos += 1;
                walk(c, pos, arcs);
                arcs.push((i, *pos));
                *pos += 1;
            }
        }
    }
    walk(t, &mut pos, &mut arcs);
    debug_assert_eq!(pos, n + 1);
    Diagram::new(n, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> Diagram {
        Diagram::new(21, [(1, 13), (2, 11), (3, 6), (7, 9), (14, 21), (17, 20)]).unwrap()
    }

    #[test]
    fn empty_diagram_gives_a_star() {
        let t = phi(&Diagram::empty(3).unwrap()).unwrap();
        assert_eq!(t, LinearTree::node(vec![LinearTree::leaf(); 3]));
        assert_eq!(phi_inv(&t, 3).unwrap(), Diagram::empty(3).unwrap());
    }

    #[test]
    fn single_arc() {
        let d = Diagram::new(4, [(1, 3)]).unwrap();
        let t = phi(&d).unwrap();
        let expect = LinearTree::node(vec![
            LinearTree::node(vec![LinearTree::leaf()]),
            LinearTree::leaf(),
        ]);
        assert_eq!(t, expect);
        assert_eq!(
            hasse_intervals(&d).unwrap(),
            vec![(0, 5), (1, 3), (2, 2), (4, 4)]
        );
    }

    #[test]
    fn worked_example_shape() {
        let t = phi(&fig2()).unwrap();
        assert_eq!(t.vertex_count(), 16);
        assert_eq!(t.internal_count(), 7);
        assert_eq!(phi_inv(&t, 21).unwrap(), fig2());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(phi(&Diagram::new(4, [(1, 3), (2, 4)]).unwrap()).is_err());
        assert!(phi(&Diagram::new(4, [(1, 2)]).unwrap()).is_err());
        let t = phi(&Diagram::empty(3).unwrap()).unwrap();
        assert!(phi_inv(&t, 4).is_err());
    }

    #[test]
    fn preorder_labelling() {
        let t = phi(&Diagram::new(4, [(1, 3)]).unwrap()).unwrap();
        let lt = t.with_preorder_labels(&[4, 2, 1, 3]).unwrap();
        assert_eq!(lt.labels_preorder(), vec![Some(4), Some(2), Some(1), Some(3)]);
        lt.check_permutation_labelling().unwrap();
        assert!(t.with_preorder_labels(&[1, 2]).is_err());
        let bad = t.with_preorder_labels(&[1, 1, 2, 3]).unwrap();
        assert!(bad.check_permutation_labelling().is_err());
    }

    #[test]
    fn json_schema() {
        let t = LinearTree::labelled(1, vec![LinearTree::labelled(2, vec![])]);
        assert_eq!(
            t.to_json(),
            r#"{"label":1,"asterisk":false,"children":[{"label":2,"asterisk":false,"children":[]}]}"#
        );
        let back: LinearTree = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
