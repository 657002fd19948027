//! Small forests and the tree/forest bijection.
//!
//! A small tree is a root together with an ordered fiber of leaves. A forest
//! of `k` small trees carrying the labels `[n]` lies in the class `F(n, k)`
//! when its top `k - 1` labels are asterisked and never sit at a root.
//!
//! [`psi`] takes a labelled linear tree with `N` vertices, `k` of them
//! internal, to `F(N + k - 1, k)`: it repeatedly cuts off the outmost
//! internal vertex with the largest label (an internal vertex whose children
//! are all leaves) together with its fiber, and leaves behind a fresh
//! asterisked leaf `(N+1)*, (N+2)*, ...`. [`psi_inv`] grafts the trees back,
//! filling the asterisked slots in increasing order, each with the
//! asterisk-free tree whose root is largest.

use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::LinearTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForestLabel {
    pub value: u32,
    pub asterisk: bool,
}

impl ForestLabel {
    pub fn plain(value: u32) -> Self {
        ForestLabel {
            value,
            asterisk: false,
        }
    }

    pub fn star(value: u32) -> Self {
        ForestLabel {
            value,
            asterisk: true,
        }
    }
}

impl fmt::Display for ForestLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, if self.asterisk { "*" } else { "" })
    }
}

/// Height-one tree: an unasterisked root and its ordered fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmallTree {
    pub root: u32,
    pub fiber: Vec<ForestLabel>,
}

impl SmallTree {
    pub fn new(root: u32, fiber: Vec<ForestLabel>) -> Self {
        SmallTree { root, fiber }
    }

    pub fn plain_count(&self) -> usize {
        self.fiber.iter().filter(|l| !l.asterisk).count()
    }

    pub fn has_asterisk(&self) -> bool {
        self.fiber.iter().any(|l| l.asterisk)
    }
}

/// Forest of small trees, kept sorted by root label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SmallTree>", into = "Vec<SmallTree>")]
pub struct SmallForest {
    trees: Vec<SmallTree>,
}

impl TryFrom<Vec<SmallTree>> for SmallForest {
    type Error = Error;

    fn try_from(trees: Vec<SmallTree>) -> Result<Self> {
        SmallForest::new(trees)
    }
}

impl From<SmallForest> for Vec<SmallTree> {
    fn from(f: SmallForest) -> Self {
        f.trees
    }
}

impl SmallForest {
    /// Sorts the trees by root and checks that all labels are distinct.
    pub fn new(mut trees: Vec<SmallTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidForest("a forest needs at least one tree".into()));
        }
        trees.sort_by_key(|t| t.root);
        let mut seen = std::collections::HashSet::new();
        for t in &trees {
            let labels = std::iter::once(t.root).chain(t.fiber.iter().map(|l| l.value));
            for v in labels {
                if v == 0 || !seen.insert(v) {
                    return Err(Error::InvalidForest(format!("label {v} is zero or repeated")));
                }
            }
        }
        Ok(SmallForest { trees })
    }

    pub fn trees(&self) -> &[SmallTree] {
        &self.trees
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn label_count(&self) -> usize {
        self.trees.iter().map(|t| 1 + t.fiber.len()).sum()
    }

    pub fn tree(&self, root: u32) -> Option<&SmallTree> {
        self.trees
            .binary_search_by_key(&root, |t| t.root)
            .ok()
            .map(|i| &self.trees[i])
    }

    /// Tree whose fiber holds `label`, if any.
    pub fn owner_of(&self, label: ForestLabel) -> Option<&SmallTree> {
        self.trees.iter().find(|t| t.fiber.contains(&label))
    }

    /// `(n, k)` such that the forest lies in `F(n, k)`, or why it does not.
    pub fn class(&self) -> Result<(u32, u32)> {
        let n = self.label_count() as u32;
        let k = self.tree_count() as u32;
        let top_plain = n - (k - 1);
        for t in &self.trees {
            if t.root > top_plain {
                return Err(Error::InvalidForest(format!(
                    "root {} exceeds {top_plain}, the largest unasterisked label",
                    t.root
                )));
            }
            for l in &t.fiber {
                if l.value > n || l.asterisk != (l.value > top_plain) {
                    return Err(Error::InvalidForest(format!(
                        "fiber label {l} breaks the rule that exactly the labels above {top_plain} are asterisked (n={n})"
                    )));
                }
            }
        }
        // distinct labels in [1, n] totalling n cover [n]
        Ok((n, k))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("forest serialization is infallible")
    }
}

impl fmt::Display for SmallForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.trees.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "({};", t.root)?;
            for (p, l) in t.fiber.iter().enumerate() {
                write!(f, "{}{l}", if p == 0 { " " } else { "," })?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

struct Arena {
    label: Vec<u32>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
}

fn flatten(t: &LinearTree) -> Arena {
    let mut arena = Arena {
        label: Vec::new(),
        parent: Vec::new(),
        children: Vec::new(),
    };
    fn go(t: &LinearTree, parent: usize, arena: &mut Arena) -> usize {
        let id = arena.label.len();
        arena.label.push(t.label.unwrap_or(0));
        arena.parent.push(parent);
        arena.children.push(Vec::new());
        for c in &t.children {
            let cid = go(c, id, arena);
            arena.children[id].push(cid);
        }
        id
    }
    go(t, usize::MAX, &mut arena);
    arena
}

/// Labelled linear tree with labels `[N]` and `k` internal vertices to its
/// small forest in `F(N + k - 1, k)`.
pub fn psi(lt: &LinearTree) -> Result<SmallForest> {
    lt.check_permutation_labelling()?;
    let arena = flatten(lt);
    let count = arena.label.len();
    let mut pending: Vec<usize> = (0..count)
        .map(|v| arena.children[v].iter().filter(|&&c| !arena.children[c].is_empty()).count())
        .collect();
    // slot[v] = asterisk value that replaced internal vertex v
    let mut slot: Vec<Option<u32>> = vec![None; count];
    let mut heap: BinaryHeap<(u32, usize)> = (1..count)
        .filter(|&v| !arena.children[v].is_empty() && pending[v] == 0)
        .map(|v| (arena.label[v], v))
        .collect();
    let fiber_of = |v: usize, slot: &[Option<u32>]| -> Vec<ForestLabel> {
        arena.children[v]
            .iter()
            .map(|&c| match slot[c] {
                Some(s) => ForestLabel::star(s),
                None => ForestLabel::plain(arena.label[c]),
            })
            .collect()
    };
    let mut trees = Vec::new();
    let mut next_star = count as u32 + 1;
    while let Some((label, v)) = heap.pop() {
        trees.push(SmallTree::new(label, fiber_of(v, &slot)));
        slot[v] = Some(next_star);
        next_star += 1;
        let p = arena.parent[v];
        pending[p] -= 1;
        if pending[p] == 0 && p != 0 {
            heap.push((arena.label[p], p));
        }
    }
    debug_assert_eq!(pending[0], 0);
    trees.push(SmallTree::new(arena.label[0], fiber_of(0, &slot)));
    SmallForest::new(trees)
}

/// Inverse of [`psi`].
pub fn psi_inv(f: &SmallForest) -> Result<LinearTree> {
    let (n, k) = f.class()?;
    let base = n - (k - 1);
    if k > 1 {
        if let Some(t) = f.trees().iter().find(|t| t.fiber.is_empty()) {
            return Err(Error::InvalidForest(format!(
                "tree rooted at {} has an empty fiber",
                t.root
            )));
        }
    }
    // unfilled asterisk slots per tree
    let mut unfilled: BTreeMap<u32, usize> = f
        .trees()
        .iter()
        .map(|t| (t.root, t.fiber.iter().filter(|l| l.asterisk).count()))
        .collect();
    let owner: BTreeMap<u32, u32> = f
        .trees()
        .iter()
        .flat_map(|t| t.fiber.iter().filter(|l| l.asterisk).map(move |l| (l.value, t.root)))
        .collect();
    let mut graft: BTreeMap<u32, u32> = BTreeMap::new();
    for s in base + 1..=n {
        let chosen = unfilled
            .iter()
            .filter(|&(_, &u)| u == 0)
            .map(|(&r, _)| r)
            .next_back()
            .ok_or_else(|| Error::InvalidForest(format!("no asterisk-free tree left to fill {s}*")))?;
        let host = owner[&s];
        unfilled.remove(&chosen);
        *unfilled
            .get_mut(&host)
            .ok_or_else(|| Error::InvalidForest(format!("slot {s}* sits in a tree already grafted")))? -= 1;
        graft.insert(s, chosen);
    }
    let (&root, &left) = unfilled
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidForest("nothing left after grafting".into()))?;
    debug_assert_eq!(unfilled.len(), 1);
    if left != 0 {
        return Err(Error::InvalidForest("the final tree still has empty slots".into()));
    }
    fn build(root: u32, f: &SmallForest, graft: &BTreeMap<u32, u32>) -> LinearTree {
        let t = f.tree(root).expect("grafted roots exist");
        let children = t
            .fiber
            .iter()
            .map(|l| {
                if l.asterisk {
                    build(graft[&l.value], f, graft)
                } else {
                    LinearTree::labelled(l.value, Vec::new())
                }
            })
            .collect();
        LinearTree::labelled(root, children)
    }
    Ok(build(root, f, &graft))
}

/// Fiber conditions met by the forests of saturated `m`-regular simple
/// stacks: an asterisk-free fiber holds `m - 1` or `m` unasterisked labels;
/// any other fiber holds at most `m` unasterisked labels, all adjacent.
pub fn check_saturated_forest(f: &SmallForest, m: u32) -> bool {
    f.trees().iter().all(|t| {
        let plain = t.plain_count();
        if !t.has_asterisk() {
            return plain + 1 == m as usize || plain == m as usize;
        }
        plain <= m as usize && plain_labels_adjacent(t)
    })
}

/// All unasterisked labels of the fiber form one contiguous run.
pub(crate) fn plain_labels_adjacent(t: &SmallTree) -> bool {
    let idx: Vec<usize> = t
        .fiber
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.asterisk)
        .map(|(i, _)| i)
        .collect();
    idx.windows(2).all(|w| w[1] == w[0] + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(v: u32) -> LinearTree {
        LinearTree::labelled(v, vec![])
    }

    #[test]
    fn single_small_tree_is_fixed() {
        let lt = LinearTree::labelled(2, vec![leaf(1), leaf(3)]);
        let f = psi(&lt).unwrap();
        assert_eq!(f.trees(), &[SmallTree::new(2, vec![ForestLabel::plain(1), ForestLabel::plain(3)])]);
        assert_eq!(psi_inv(&f).unwrap(), lt);
    }

    #[test]
    fn path_of_three() {
        let lt = LinearTree::labelled(1, vec![LinearTree::labelled(2, vec![leaf(3)])]);
        let f = psi(&lt).unwrap();
        let expect = SmallForest::new(vec![
            SmallTree::new(2, vec![ForestLabel::plain(3)]),
            SmallTree::new(1, vec![ForestLabel::star(4)]),
        ])
        .unwrap();
        assert_eq!(f, expect);
        assert_eq!(f.class().unwrap(), (4, 2));
        assert_eq!(psi_inv(&f).unwrap(), lt);
    }

    #[test]
    fn rejects_malformed_forests() {
        // asterisked label too small for the class
        let f = SmallForest::new(vec![
            SmallTree::new(1, vec![ForestLabel::star(2)]),
            SmallTree::new(3, vec![ForestLabel::plain(4)]),
        ])
        .unwrap();
        assert!(psi_inv(&f).is_err());
        assert!(SmallForest::new(vec![
            SmallTree::new(1, vec![ForestLabel::plain(1)]),
        ])
        .is_err());
        // root above the unasterisked range
        let f = SmallForest::new(vec![
            SmallTree::new(1, vec![ForestLabel::plain(2)]),
            SmallTree::new(4, vec![ForestLabel::plain(3)]),
        ])
        .unwrap();
        assert!(f.class().is_err());
    }

    #[test]
    fn json_schema() {
        let f = SmallForest::new(vec![
            SmallTree::new(2, vec![ForestLabel::plain(3)]),
            SmallTree::new(1, vec![ForestLabel::star(4)]),
        ])
        .unwrap();
        let text = f.to_json();
        assert_eq!(
            text,
            r#"[{"root":1,"fiber":[{"value":4,"asterisk":true}]},{"root":2,"fiber":[{"value":3,"asterisk":false}]}]"#
        );
        let back: SmallForest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.to_string(), "(1; 4*) (2; 3)");
    }

    #[test]
    fn saturated_fiber_rules() {
        let three = SmallForest::new(vec![SmallTree::new(
            1,
            vec![ForestLabel::plain(2), ForestLabel::plain(3), ForestLabel::plain(4)],
        )])
        .unwrap();
        assert!(!check_saturated_forest(&three, 2));
        assert!(check_saturated_forest(&three, 3));
        let split = SmallForest::new(vec![
            SmallTree::new(
                1,
                vec![ForestLabel::plain(3), ForestLabel::star(6), ForestLabel::plain(4)],
            ),
            SmallTree::new(2, vec![ForestLabel::plain(5)]),
        ])
        .unwrap();
        assert!(!check_saturated_forest(&split, 2));
    }
}
