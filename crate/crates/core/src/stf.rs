//! Stack-to-forest labelling algorithms.
//!
//! [`stf`] sends a 2-regular simple stack and a labelling of its tree to a
//! small forest: label [`phi`]'s tree, then apply [`psi`]. [`estf`] does the
//! same for extended stacks after a preprocessing step that makes both
//! terminals degree one, and reserves the smallest labels for the primary
//! component. Labellings are given as permutations indexed by the preorder
//! position of the tree vertex.

use std::collections::VecDeque;

use itertools::Itertools;

use crate::diagram::{classify, Arc, ConstraintProfile, Diagram};
use crate::error::{Error, Result};
use crate::forest::{plain_labels_adjacent, psi, psi_inv, ForestLabel, SmallForest};
use crate::primary::{PrimaryClass, TerminalSurgery};
use crate::tree::{hasse_intervals, phi, phi_inv, LinearTree};

/// Forest of `d` under the preorder labelling `labelling` (a permutation of
/// `[n - k + 1]`).
pub fn stf(d: &Diagram, labelling: &[u32]) -> Result<SmallForest> {
    let lt = phi(d)?.with_preorder_labels(labelling)?;
    psi(&lt)
}

/// Forests of `d` for the first `limit` labellings in lexicographic order.
pub fn stf_all(d: &Diagram, limit: Option<usize>) -> Result<impl Iterator<Item = SmallForest>> {
    let tree = phi(d)?;
    let count = tree.vertex_count() as u32;
    let perms = (1..=count).permutations(count as usize);
    Ok(perms.take(limit.unwrap_or(usize::MAX)).map(move |p| {
        psi(&tree.with_preorder_labels(&p).expect("length matches")).expect("permutation labelling")
    }))
}

/// Inverse of [`stf`]: the stack and the preorder labelling.
pub fn stf_inverse(f: &SmallForest) -> Result<(Diagram, Vec<u32>)> {
    let lt = psi_inv(f)?;
    let shape = lt.unlabelled();
    let n = shape.leaf_count() as u32 + 2 * (shape.internal_count() as u32 - 1);
    let labels = lt.labels_preorder().into_iter().map(|l| l.unwrap_or(0)).collect();
    Ok((phi_inv(&shape, n)?, labels))
}

/// Result of the eSTF preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step0 {
    pub diagram: Diagram,
    /// `(deg 1 - 1) + (deg n - 1)` of the input.
    pub d: i32,
    /// Number of arcs incident to a terminal.
    pub k1: u32,
    /// Images of those arcs in `diagram`.
    pub primary_arcs: Vec<Arc>,
}

fn require_extended_stack(d: &Diagram) -> Result<()> {
    let report = classify(d, &ConstraintProfile::extended(2));
    if report.satisfies() {
        Ok(())
    } else {
        Err(Error::ProfileViolation(format!(
            "{d} is not an extended 2-regular simple stack: {report:?}"
        )))
    }
}

/// Makes both terminals degree one. A degree-0 terminal is deleted. At a
/// degree-2 terminal a new vertex is inserted just left of it and takes one
/// of the two arcs: the outer arc at vertex 1, the inner arc at vertex n.
pub fn estf_step0(d: &Diagram) -> Result<Step0> {
    require_extended_stack(d)?;
    let n = d.n();
    let deg = d.degrees();
    let (deg1, degn) = (deg[1], deg[n as usize]);
    if n < 3 {
        return Err(Error::InvalidDiagram(format!("{d}: too short for terminal surgery")));
    }
    let mut newpos = vec![0u32; n as usize + 1];
    let mut split_left = 0;
    let mut split_right = 0;
    let mut next = 1;
    for v in 1..=n {
        let dv = deg[v as usize];
        let terminal = v == 1 || v == n;
        if terminal && dv == 0 {
            continue;
        }
        if terminal && dv == 2 {
            if v == 1 {
                split_left = next;
            } else {
                split_right = next;
            }
            next += 1;
        }
        newpos[v as usize] = next;
        next += 1;
    }
    let outer_at_1 = d.arcs().iter().filter(|a| a.0 == 1).map(|a| a.1).max();
    let inner_at_n = d.arcs().iter().filter(|a| a.1 == n).map(|a| a.0).max();
    let mut arcs = Vec::with_capacity(d.arc_count());
    let mut primary = Vec::new();
    for &(i, j) in d.arcs() {
        let ni = if i == 1 && deg1 == 2 && Some(j) == outer_at_1 {
            split_left
        } else {
            newpos[i as usize]
        };
        let nj = if j == n && degn == 2 && Some(i) == inner_at_n {
            split_right
        } else {
            newpos[j as usize]
        };
        arcs.push((ni, nj));
        if i == 1 || j == n {
            primary.push((ni, nj));
        }
    }
    let diagram = Diagram::new(next - 1, arcs)?;
    debug_assert!(classify(&diagram, &ConstraintProfile::plain(2)).noncrossing);
    primary.sort_unstable();
    Ok(Step0 {
        diagram,
        d: deg1 as i32 + degn as i32 - 2,
        k1: primary.len() as u32,
        primary_arcs: primary,
    })
}

/// Preorder positions of the root and the primary arcs of `step`, listed in
/// breadth-first order (levels from the root down, siblings left to right).
fn primary_positions_bfs(step: &Step0, tree: &LinearTree) -> Result<Vec<usize>> {
    let intervals = hasse_intervals(&step.diagram)?;
    // preorder id -> child ids
    let mut kids: Vec<Vec<usize>> = Vec::new();
    fn index(t: &LinearTree, kids: &mut Vec<Vec<usize>>) -> usize {
        let id = kids.len();
        kids.push(Vec::new());
        for c in &t.children {
            let cid = index(c, kids);
            kids[id].push(cid);
        }
        id
    }
    index(tree, &mut kids);
    let is_primary = |p: usize| p == 0 || step.primary_arcs.binary_search(&intervals[p]).is_ok();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        if is_primary(p) {
            order.push(p);
        }
        queue.extend(kids[p].iter().copied());
    }
    Ok(order)
}

/// Number of labellings eSTF accepts for `d`: `(n + d - k - k1)!` in the
/// notation of [`Step0`].
pub fn estf_rest_size(d: &Diagram) -> Result<usize> {
    let step = estf_step0(d)?;
    Ok(step.diagram.n() as usize - step.diagram.arc_count() - step.k1 as usize)
}

/// eSTF: surgery, tree, breadth-first primary labels `1..=k1+1`, the given
/// labels for the remaining vertices (in preorder), then [`psi`].
/// `rest_labelling` must be a permutation of `[k1 + 2, N]`, `N` the vertex
/// count of the tree.
pub fn estf(d: &Diagram, rest_labelling: &[u32]) -> Result<SmallForest> {
    let step = estf_step0(d)?;
    let tree = phi(&step.diagram)?;
    let primary = primary_positions_bfs(&step, &tree)?;
    let count = tree.vertex_count();
    let first_rest = primary.len() as u32 + 1;
    if rest_labelling.len() + primary.len() != count {
        return Err(Error::InvalidLabelling(format!(
            "expected {} labels for the non-primary vertices, got {}",
            count - primary.len(),
            rest_labelling.len()
        )));
    }
    let mut labels = vec![0u32; count];
    for (rank, &p) in primary.iter().enumerate() {
        labels[p] = rank as u32 + 1;
    }
    let mut rest = rest_labelling.iter();
    for slot in labels.iter_mut().filter(|l| **l == 0) {
        let &v = rest.next().expect("lengths checked");
        if v < first_rest {
            return Err(Error::InvalidLabelling(format!(
                "label {v} is reserved for the primary component"
            )));
        }
        *slot = v;
    }
    psi(&tree.with_preorder_labels(&labels)?)
}

/// eSTF with the identity labelling `k1+2, k1+3, ...` of the rest.
pub fn estf_canonical(d: &Diagram) -> Result<SmallForest> {
    let rest = estf_rest_size(d)?;
    let step_k1 = estf_step0(d)?.k1;
    let labels: Vec<u32> = (0..rest as u32).map(|i| step_k1 + 2 + i).collect();
    estf(d, &labels)
}

/// Recovers the extended stack from its eSTF forest. eSTF merges mirror
/// images of some primary classes, so the class must be supplied.
pub fn estf_inverse(f: &SmallForest, class: PrimaryClass) -> Result<Diagram> {
    let (stack, _) = stf_inverse(f)?;
    let mut n = stack.n();
    let mut arcs: Vec<Arc> = stack.arcs().to_vec();
    let (left, right) = class.surgery();
    match right {
        TerminalSurgery::Split => {
            arcs.iter_mut().for_each(|a| a.1 = a.1.min(n - 1));
            n -= 1;
        }
        TerminalSurgery::Deleted => n += 1,
        TerminalSurgery::Kept => {}
    }
    match left {
        TerminalSurgery::Split => {
            arcs.iter_mut().for_each(|a| *a = (a.0.saturating_sub(1).max(1), a.1 - 1));
            n -= 1;
        }
        TerminalSurgery::Deleted => {
            arcs.iter_mut().for_each(|a| *a = (a.0 + 1, a.1 + 1));
            n += 1;
        }
        TerminalSurgery::Kept => {}
    }
    let d = Diagram::new(n, arcs)?;
    require_extended_stack(&d)?;
    let (deg1, degn) = class.terminal_degrees();
    if (d.degree(1), d.degree(n)) != (deg1, degn) {
        return Err(Error::InvalidForest(format!(
            "forest does not encode a stack of class {class}"
        )));
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberPosition {
    First,
    Last,
    Only,
}

/// Where the asterisked labels of the primary internal vertices sit. Entry
/// `i` is `(root, position)` for the `i`-th of the top `k1` asterisked labels
/// in increasing order.
pub fn primary_skeleton(class: PrimaryClass) -> &'static [(u32, FiberPosition)] {
    use FiberPosition::*;
    use PrimaryClass::*;
    match class {
        A1 => &[(2, First), (1, First)],
        A1Mirror => &[(2, Last), (1, Last)],
        A2 => &[(2, First), (1, Only)],
        A2Mirror => &[(2, Last), (1, Only)],
        A3 => &[(2, First), (1, Last), (1, First)],
        A3Mirror => &[(3, Last), (1, Last), (1, First)],
        A4 => &[(1, Only)],
        A5 => &[(2, Last), (2, First), (1, Only)],
        A6 => &[(3, Last), (2, First), (1, Last), (1, First)],
    }
}

fn skeleton_matches(f: &SmallForest, class: PrimaryClass, top: u32) -> bool {
    let k1 = class.k1();
    primary_skeleton(class).iter().enumerate().all(|(i, &(root, pos))| {
        let label = ForestLabel::star(top - k1 + 1 + i as u32);
        let Some(t) = f.tree(root) else { return false };
        match pos {
            FiberPosition::First => t.fiber.first() == Some(&label),
            FiberPosition::Last => t.fiber.last() == Some(&label),
            FiberPosition::Only => t.fiber == [label],
        }
    })
}

/// Properties of eSTF images of saturated extended stacks with `n` vertices,
/// `k` arcs and primary data `(d, k1)`:
/// every fiber holds at most two unasterisked labels, adjacent when two;
/// roots `1..=k1+1` exist and the top `k1` asterisked labels sit where the
/// primary class puts them; the next asterisked label down, if any, sits in
/// a tree rooted in `1..=k1+1`.
pub fn check_extended_forest(f: &SmallForest, n: u32, d: i32, k: u32, k1: u32) -> bool {
    let total = n as i64 + d as i64 + 1;
    if total < 1 || f.class().ok() != Some((total as u32, k + 1)) || k1 > k {
        return false;
    }
    let total = total as u32;
    let fibers_ok = f
        .trees()
        .iter()
        .all(|t| t.plain_count() <= 2 && plain_labels_adjacent(t));
    let roots_ok = (1..=k1 + 1).all(|r| f.tree(r).is_some());
    if !(fibers_ok && roots_ok) {
        return false;
    }
    let skeleton_ok = PrimaryClass::ALL
        .iter()
        .filter(|c| c.k1() == k1 && c.d() == d)
        .any(|&c| skeleton_matches(f, c, total));
    let below_ok = k == k1
        || f
            .owner_of(ForestLabel::star(total - k1))
            .is_some_and(|t| (1..=k1 + 1).contains(&t.root));
    skeleton_ok && below_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::SmallTree;

    fn fig2() -> Diagram {
        Diagram::new(21, [(1, 13), (2, 11), (3, 6), (7, 9), (14, 21), (17, 20)]).unwrap()
    }

    fn fig5() -> Diagram {
        Diagram::new(21, [(1, 12), (1, 10), (2, 5), (6, 8), (13, 20), (16, 19)]).unwrap()
    }

    fn p(v: u32) -> ForestLabel {
        ForestLabel::plain(v)
    }

    fn s(v: u32) -> ForestLabel {
        ForestLabel::star(v)
    }

    fn fig4_forest() -> SmallForest {
        SmallForest::new(vec![
            SmallTree::new(1, vec![s(22), s(18)]),
            SmallTree::new(2, vec![s(21), p(10)]),
            SmallTree::new(3, vec![s(19), s(20), p(15)]),
            SmallTree::new(7, vec![p(13)]),
            SmallTree::new(8, vec![p(12), p(4)]),
            SmallTree::new(9, vec![p(5), p(11), s(17)]),
            SmallTree::new(16, vec![p(6), p(14)]),
        ])
        .unwrap()
    }

    const FIG3: [u32; 16] = [1, 2, 3, 8, 12, 4, 7, 13, 15, 10, 9, 5, 11, 16, 6, 14];

    #[test]
    fn worked_example_stf() {
        let f = stf(&fig2(), &FIG3).unwrap();
        assert_eq!(f, fig4_forest());
        assert_eq!(f.class().unwrap(), (22, 7));
        assert!(check_saturated_forest_m2(&f));
        let (back, labels) = stf_inverse(&f).unwrap();
        assert_eq!(back, fig2());
        assert_eq!(labels, FIG3);
    }

    fn check_saturated_forest_m2(f: &SmallForest) -> bool {
        crate::forest::check_saturated_forest(f, 2)
    }

    #[test]
    fn worked_example_step0_and_estf() {
        let step = estf_step0(&fig5()).unwrap();
        assert_eq!(step.diagram, fig2());
        assert_eq!((step.d, step.k1), (0, 2));
        assert_eq!(estf_rest_size(&fig5()).unwrap(), 13);
        let f = estf(&fig5(), &FIG3[3..]).unwrap();
        assert_eq!(f, fig4_forest());
        assert!(check_extended_forest(&f, 21, 0, 6, 2));
        assert_eq!(estf_inverse(&f, PrimaryClass::A1).unwrap(), fig5());
    }

    #[test]
    fn step0_cases() {
        let d = Diagram::new(5, [(1, 3), (1, 5)]).unwrap();
        let step = estf_step0(&d).unwrap();
        assert_eq!(step.diagram, Diagram::new(6, [(1, 6), (2, 4)]).unwrap());
        assert_eq!((step.d, step.k1), (1, 2));
        let d = Diagram::new(7, [(1, 7)]).unwrap();
        let step = estf_step0(&d).unwrap();
        assert_eq!(step.diagram, d);
        assert_eq!((step.d, step.k1), (0, 1));
        let d = Diagram::new(6, [(1, 3), (1, 6), (4, 6)]).unwrap();
        let step = estf_step0(&d).unwrap();
        assert_eq!(step.diagram, Diagram::new(8, [(1, 8), (2, 4), (5, 7)]).unwrap());
        assert_eq!((step.d, step.k1), (2, 3));
    }

    #[test]
    fn single_arc_estf() {
        let d = Diagram::new(3, [(1, 3)]).unwrap();
        let f = estf_canonical(&d).unwrap();
        assert_eq!(f.tree_count(), 2);
        assert!(f.tree(1).is_some() && f.tree(2).is_some());
        assert!(check_extended_forest(&f, 3, 0, 1, 1));
        let unsaturated = estf_canonical(&Diagram::new(5, [(1, 5)]).unwrap()).unwrap();
        assert!(!check_extended_forest(&unsaturated, 5, 0, 1, 1));
        assert_eq!(estf_inverse(&f, PrimaryClass::A4).unwrap(), d);
    }

    #[test]
    fn stf_all_counts_labellings() {
        let d = Diagram::new(5, [(1, 3)]).unwrap();
        assert_eq!(stf_all(&d, None).unwrap().count(), 120);
        assert_eq!(stf_all(&d, Some(5)).unwrap().count(), 5);
        let forests: std::collections::HashSet<_> = stf_all(&d, None).unwrap().collect();
        assert_eq!(forests.len(), 120);
    }

    #[test]
    fn empty_diagram_gives_one_plain_tree() {
        let f = stf(&Diagram::empty(4).unwrap(), &[3, 1, 2, 4, 5]).unwrap();
        assert_eq!(f.tree_count(), 1);
        assert!(!f.trees()[0].has_asterisk());
        assert_eq!(f.trees()[0].fiber.len(), 4);
    }
}
