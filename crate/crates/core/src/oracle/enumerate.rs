use rayon::prelude::*;

use crate::diagram::{crosses, Arc, ConstraintProfile, Diagram};

/// Mutable search state shared by the lazy iterator and the visitor walk.
#[derive(Clone)]
pub(crate) struct SearchState {
    pub n: u32,
    pub profile: ConstraintProfile,
    pub arcs: Vec<Arc>,
    pub deg: Vec<u32>,
}

impl SearchState {
    pub fn new(n: u32, profile: ConstraintProfile) -> Self {
        SearchState {
            n,
            profile,
            arcs: Vec::new(),
            deg: vec![0; n as usize + 2],
        }
    }

    #[inline]
    fn free(&self, v: u32) -> bool {
        self.deg[v as usize] < self.profile.cap(self.n, v)
    }

    #[inline]
    fn fits(&self, arc: Arc) -> bool {
        self.arcs.iter().all(|&a| a != arc && !crosses(a, arc))
    }

    pub fn push(&mut self, arc: Arc) {
        self.deg[arc.0 as usize] += 1;
        self.deg[arc.1 as usize] += 1;
        self.arcs.push(arc);
    }

    pub fn pop(&mut self) -> Option<Arc> {
        let arc = self.arcs.pop()?;
        self.deg[arc.0 as usize] -= 1;
        self.deg[arc.1 as usize] -= 1;
        Some(arc)
    }

    /// Smallest legal arc `>= from` in lexicographic order.
    pub fn next_candidate(&self, from: Arc) -> Option<Arc> {
        let m = self.profile.m;
        for i in from.0..=self.n {
            if !self.free(i) {
                continue;
            }
            let j0 = if i == from.0 { from.1.max(i + m) } else { i + m };
            for j in j0..=self.n {
                if self.free(j) && self.fits((i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// True when no legal arc can be added.
    pub fn saturated(&self) -> bool {
        self.next_candidate((1, 1)).is_none()
    }

    pub fn diagram(&self) -> Diagram {
        Diagram::from_sorted_unchecked(self.n, self.arcs.clone())
    }
}

/// Lazy, lexicographically ordered stream of the diagrams with exactly `k`
/// arcs in a family. Arcs are placed left to right; every partial diagram is
/// legal, so illegal branches are cut as soon as they appear.
pub struct DiagramIter {
    state: SearchState,
    k: usize,
    saturated_only: bool,
    cursor: Arc,
    done: bool,
}

impl DiagramIter {
    pub(crate) fn new(n: u32, k: usize, profile: ConstraintProfile, saturated_only: bool) -> Self {
        DiagramIter {
            state: SearchState::new(n, profile),
            k,
            saturated_only,
            cursor: (1, 1),
            done: false,
        }
    }

    fn backtrack(&mut self) {
        match self.state.pop() {
            Some((i, j)) => self.cursor = (i, j + 1),
            None => self.done = true,
        }
    }
}

impl Iterator for DiagramIter {
    type Item = Diagram;

    fn next(&mut self) -> Option<Diagram> {
        while !self.done {
            if self.state.arcs.len() == self.k {
                let keep = !self.saturated_only || self.state.saturated();
                let d = keep.then(|| self.state.diagram());
                self.backtrack();
                if d.is_some() {
                    return d;
                }
                continue;
            }
            match self.state.next_candidate(self.cursor) {
                Some(arc) => {
                    self.state.push(arc);
                    self.cursor = (arc.0, arc.1 + 1);
                }
                None => self.backtrack(),
            }
        }
        None
    }
}

/// Preorder walk over every legal diagram with at most `max_k` arcs whose
/// first arc is `>= from`, starting at the current state.
pub(crate) fn walk<F>(state: &mut SearchState, from: Arc, max_k: usize, visit: &mut F)
where
    F: FnMut(&SearchState),
{
    visit(state);
    if state.arcs.len() >= max_k {
        return;
    }
    let mut cursor = from;
    while let Some(arc) = state.next_candidate(cursor) {
        state.push(arc);
        walk(state, (arc.0, arc.1 + 1), max_k, visit);
        state.pop();
        cursor = (arc.0, arc.1 + 1);
    }
}

/// Runs one accumulator per first-arc branch on the rayon pool and returns
/// the accumulators in canonical order. Index 0 holds the empty diagram.
pub(crate) fn par_branches<A, F>(
    n: u32,
    profile: ConstraintProfile,
    max_k: usize,
    init: impl Fn() -> A + Sync,
    visit: F,
) -> Vec<A>
where
    A: Send,
    F: Fn(&mut A, &SearchState) + Sync,
{
    let root = SearchState::new(n, profile);
    let mut firsts = Vec::new();
    let mut cursor = (1, 1);
    while let Some(arc) = root.next_candidate(cursor) {
        firsts.push(arc);
        cursor = (arc.0, arc.1 + 1);
    }
    let mut empty = init();
    visit(&mut empty, &root);
    let branches: Vec<A> = if max_k == 0 {
        Vec::new()
    } else {
        firsts
            .par_iter()
            .map(|&arc| {
                let mut acc = init();
                let mut state = root.clone();
                state.push(arc);
                walk(&mut state, (arc.0, arc.1 + 1), max_k, &mut |s| visit(&mut acc, s));
                acc
            })
            .collect()
    };
    std::iter::once(empty).chain(branches).collect()
}
