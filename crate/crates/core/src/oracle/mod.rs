//! Exhaustive generation of every diagram in a structure family.
//!
//! Arcs are placed in lexicographic order, and a branch is cut as soon as
//! the partial diagram breaks the length, degree or noncrossing constraint,
//! so every legal diagram is visited exactly once. Counting runs split the
//! search over the choice of first arc on the rayon pool and merge the
//! branch results in canonical order; the results do not depend on the
//! number of threads.

mod enumerate;
pub mod partitions;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diagram::{ConstraintProfile, Diagram};
use crate::primary::{classify_terminals, PrimaryClass};
use crate::ExactInt;

pub use enumerate::DiagramIter;
pub use partitions::{count_dual_ordered_partitions, count_labelled};

use enumerate::par_branches;

/// Diagrams on `[n]` with exactly `k` arcs that satisfy `p` (and are
/// saturated, if requested), in lexicographic order of their arc lists.
pub fn enumerate_diagrams(n: u32, k: usize, p: ConstraintProfile, saturated_only: bool) -> DiagramIter {
    DiagramIter::new(n, k, p, saturated_only)
}

/// Same diagrams as [`enumerate_diagrams`], generated in parallel.
pub fn collect_diagrams(n: u32, k: usize, p: ConstraintProfile, saturated_only: bool) -> Vec<Diagram> {
    par_branches(n, p, k, Vec::new, |acc: &mut Vec<Diagram>, s| {
        if s.arcs.len() == k && (!saturated_only || s.saturated()) {
            acc.push(s.diagram());
        }
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Counts indexed by arc number, from 0 to the larger of `n/2` and the
/// maximum arc count.
pub fn count_by_k(n: u32, p: ConstraintProfile, saturated_only: bool) -> Vec<ExactInt> {
    let top = (n / 2).max(max_arcs(n, p));
    count_by_k_upto(n, p, saturated_only, top as usize)
}

/// Counts for arc numbers `0..=max_k`.
pub fn count_by_k_upto(n: u32, p: ConstraintProfile, saturated_only: bool, max_k: usize) -> Vec<ExactInt> {
    let init = || vec![0u64; max_k + 1];
    let branches = par_branches(n, p, max_k, init, |acc: &mut Vec<u64>, s| {
        if !saturated_only || s.saturated() {
            acc[s.arcs.len()] += 1;
        }
    });
    let mut total = vec![0u64; max_k + 1];
    for b in branches {
        for (t, v) in total.iter_mut().zip(b) {
            *t += v;
        }
    }
    total.into_iter().map(ExactInt::from).collect()
}

pub fn count(n: u32, k: usize, p: ConstraintProfile, saturated_only: bool) -> ExactInt {
    count_by_k_upto(n, p, saturated_only, k)[k].clone()
}

/// Largest arc count of a diagram in the family.
pub fn max_arcs(n: u32, p: ConstraintProfile) -> u32 {
    let (n, m) = (n as i64, p.m as i64);
    if p.terminal_cap == 1 && p.internal_cap == 1 {
        return ((n - m + 1).max(0) / 2) as u32;
    }
    if p.is_extended() && m == 2 {
        return if n >= 3 { (n / 2) as u32 } else { 0 };
    }
    max_arcs_search(n as u32, p)
}

fn max_arcs_search(n: u32, p: ConstraintProfile) -> u32 {
    let counts = count_by_k_upto(n, p, false, n as usize);
    counts.iter().rposition(|c| *c > ExactInt::from(0)).unwrap_or(0) as u32
}

/// Saturated diagrams with `max_arcs(n, p) - j` arcs.
pub fn count_k_saturated(n: u32, j: u32, p: ConstraintProfile) -> ExactInt {
    let top = max_arcs(n, p);
    if j > top {
        return ExactInt::from(0);
    }
    count(n, (top - j) as usize, p, true)
}

fn empty_class_map() -> BTreeMap<PrimaryClass, ExactInt> {
    PrimaryClass::ALL.iter().map(|&c| (c, ExactInt::from(0))).collect()
}

/// Saturated extended 2-regular simple stacks with `k` arcs, by primary
/// class. Every class is present in the map.
pub fn count_by_primary_class(n: u32, k: usize) -> BTreeMap<PrimaryClass, ExactInt> {
    class_counts_by_k(n, k).pop().expect("k + 1 entries")
}

/// Per-class counts for every arc number `0..=max_k`. Saturated diagrams
/// that fit no class (only possible for tiny `n`) are not counted.
pub fn class_counts_by_k(n: u32, max_k: usize) -> Vec<BTreeMap<PrimaryClass, ExactInt>> {
    let p = ConstraintProfile::extended(2);
    let init = || vec![[0u64; 9]; max_k + 1];
    let branches = par_branches(n, p, max_k, init, |acc: &mut Vec<[u64; 9]>, s| {
        if s.saturated() {
            if let Ok(pc) = classify_terminals(&s.diagram()) {
                let idx = PrimaryClass::ALL.iter().position(|&c| c == pc.class).expect("listed");
                acc[s.arcs.len()][idx] += 1;
            }
        }
    });
    let mut out: Vec<BTreeMap<PrimaryClass, ExactInt>> = (0..=max_k).map(|_| empty_class_map()).collect();
    for b in branches {
        for (k, row) in b.iter().enumerate() {
            for (idx, &v) in row.iter().enumerate() {
                *out[k].get_mut(&PrimaryClass::ALL[idx]).expect("all classes present") += v;
            }
        }
    }
    out
}

/// Saturated extended diagrams whose terminal degrees fit no class, grouped
/// by `(deg 1, deg n)`. Used to audit classification completeness.
pub fn unclassified_saturated(n: u32) -> BTreeMap<(u32, u32), u64> {
    let p = ConstraintProfile::extended(2);
    let branches = par_branches(n, p, n as usize, BTreeMap::new, |acc: &mut BTreeMap<(u32, u32), u64>, s| {
        if s.saturated() && classify_terminals(&s.diagram()).is_err() {
            *acc.entry((s.deg[1], s.deg[n as usize])).or_default() += 1;
        }
    });
    let mut out = BTreeMap::new();
    for b in branches {
        for (key, v) in b {
            *out.entry(key).or_default() += v;
        }
    }
    out
}

/// Parallel map over every diagram of a family (all arc counts), with
/// results in canonical order.
pub fn map_all<T, F>(n: u32, p: ConstraintProfile, saturated_only: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Diagram) -> T + Sync,
{
    par_branches(n, p, n as usize, Vec::new, |acc: &mut Vec<T>, s| {
        if !saturated_only || s.saturated() {
            acc.push(f(&s.diagram()));
        }
    })
    .into_par_iter()
    .flatten()
    .collect()
}
