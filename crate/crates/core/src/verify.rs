//! Cross-check suites: closed forms against the oracle, evaluation paths
//! against each other, bijections against their inverses.
//!
//! Cases run in increasing `(n, k)` order and each check keeps its first
//! failure, so a reported failure is the smallest failing case.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{is_saturated, visible_vertices, ConstraintProfile, Diagram};
use crate::forest::{check_saturated_forest, psi, psi_inv, ForestLabel, SmallForest, SmallTree};
use crate::primary::{classify_terminals, PrimaryClass};
use crate::stf::{check_extended_forest, estf, estf_inverse, estf_step0, stf, stf_all, stf_inverse};
use crate::tree::{phi, phi_inv, LinearTree};
use crate::{formulas, oracle, ExactInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Elo,
    Plain,
    Hierarchy,
    Partitions,
    Components,
    Bijections,
    Forests,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Elo,
        Suite::Plain,
        Suite::Hierarchy,
        Suite::Partitions,
        Suite::Components,
        Suite::Bijections,
        Suite::Forests,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Elo => "elo",
            Suite::Plain => "plain",
            Suite::Hierarchy => "hierarchy",
            Suite::Partitions => "partitions",
            Suite::Components => "components",
            Suite::Bijections => "bijections",
            Suite::Forests => "forests",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sweep bounds. Oracle sweeps cover `n <= max_n`.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_n: u32,
    /// Largest `l` in the partition sweep.
    pub max_l: u32,
    /// Largest `n` for formula-only sweeps.
    pub formula_n: u32,
    /// Largest `n` for the closed polynomials.
    pub poly_n: u32,
    /// Largest `n` for which every labelling of every stack is materialized.
    pub materialize_n: u32,
    pub random_trees: usize,
    pub mutations: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_n: 12,
            max_l: 6,
            formula_n: 40,
            poly_n: 60,
            materialize_n: 7,
            random_trees: 1000,
            mutations: 3000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }
}

/// Accumulates one named check.
struct Check {
    name: String,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            cases: 0,
            failure: None,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, got: T, want: T, at: impl FnOnce() -> String) {
        let ok = got == want;
        self.case(ok, || format!("{}: got {got:?}, expected {want:?}", at()));
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            passed: self.failure.is_none(),
            first_failure: self.failure,
        }
    }
}

pub fn run(suite: Suite, bounds: &Bounds) -> Report {
    let checks = match suite {
        Suite::Elo => elo_suite(bounds),
        Suite::Plain => plain_suite(bounds),
        Suite::Hierarchy => hierarchy_suite(bounds),
        Suite::Partitions => partitions_suite(bounds),
        Suite::Components => components_suite(bounds),
        Suite::Bijections => bijections_suite(bounds),
        Suite::Forests => forests_suite(bounds),
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|&s| {
                run(s, bounds).checks.into_iter().map(move |mut c| {
                    c.name = format!("{s}/{}", c.name);
                    c
                })
            })
            .collect(),
    };
    Report {
        suite: suite.name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn show<T: fmt::Display, E: fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn ok_eq(r: &crate::Result<ExactInt>, want: &ExactInt) -> bool {
    matches!(r, Ok(v) if v == want)
}

pub fn elo_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut c = Check::new("elo formula equals oracle count");
    for n in 6..=b.max_n {
        let counts = oracle::count_by_k(n, ConstraintProfile::extended(2), true);
        for k in 3..=n / 2 {
            let f = formulas::elo(n as i64, k as i64);
            let want = &counts[k as usize];
            c.case(ok_eq(&f, want), || format!("n={n} k={k}: formula {}, oracle {want}", show(&f)));
        }
    }
    vec![c.done()]
}

/// `n` below which the empty diagram is saturated but the coefficient
/// formula returns zero.
fn degenerate_plain(n: u32, k: u32, m: u32) -> bool {
    k == 0 && n + 1 < m
}

pub fn plain_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut agree = Check::new("rs_coeff equals oracle count for n >= m-1");
    let mut degenerate = Check::new("rs_coeff misses only the empty diagram when n < m-1");
    let mut support = Check::new("rs_coeff vanishes above the maximum arc count");
    for m in 2..=4u32 {
        for n in 1..=b.max_n {
            let counts = oracle::count_by_k(n, ConstraintProfile::plain(m), true);
            for k in 0..=n / 2 {
                let f = formulas::rs_coeff(n as i64, k as i64, m as i64);
                let want = &counts[k as usize];
                if degenerate_plain(n, k, m) {
                    degenerate.case(
                        matches!(&f, Ok(v) if *v == ExactInt::from(0)) && *want == ExactInt::from(1),
                        || format!("n={n} k={k} m={m}: formula {}, oracle {want}", show(&f)),
                    );
                } else {
                    agree.case(ok_eq(&f, want), || {
                        format!("n={n} k={k} m={m}: formula {}, oracle {want}", show(&f))
                    });
                }
            }
        }
        for n in 0..=b.formula_n {
            let top = (n as i64 - m as i64 + 1).max(0) / 2;
            for k in top + 1..=n as i64 / 2 + 1 {
                let f = formulas::rs_coeff(n as i64, k, m as i64);
                support.case(ok_eq(&f, &ExactInt::from(0)), || format!("n={n} k={k} m={m}: {}", show(&f)));
            }
        }
    }
    let mut closed = Check::new("rs2 and rs3 equal rs_coeff");
    for n in 0..=b.formula_n as i64 {
        for k in 0..=n / 2 {
            let s2 = formulas::rs_coeff(n, k, 2);
            let s3 = formulas::rs_coeff(n, k, 3);
            let c2 = formulas::rs2(n, k);
            let c3 = formulas::rs3(n, k);
            closed.case(s2.is_ok() && s2 == c2, || {
                format!("n={n} k={k}: rs2 {} vs series {}", show(&c2), show(&s2))
            });
            closed.case(s3.is_ok() && s3 == c3, || {
                format!("n={n} k={k}: rs3 {} vs series {}", show(&c3), show(&s3))
            });
        }
    }
    let mut sw = Check::new("stack count formula equals oracle count");
    for n in 1..=b.max_n {
        let counts = oracle::count_by_k(n, ConstraintProfile::plain(2), false);
        for k in 1..=n / 2 {
            let f = formulas::count_stacks_sw(n as i64, k as i64);
            let want = &counts[k as usize];
            sw.case(ok_eq(&f, want), || format!("n={n} k={k}: formula {}, oracle {want}", show(&f)));
        }
    }
    vec![agree.done(), degenerate.done(), support.done(), closed.done(), sw.done()]
}

pub fn hierarchy_suite(b: &Bounds) -> Vec<CheckOutcome> {
    type Poly = fn(i64) -> crate::Result<ExactInt>;
    let lo: [(i64, Poly); 3] = [(1, formulas::lo0), (3, formulas::lo1), (3, formulas::lo2)];
    let elo: [(i64, Poly); 3] = [(5, formulas::elo0), (7, formulas::elo1), (8, formulas::elo2)];
    let mut lo_check = Check::new("lo_sat equals the closed polynomials");
    let mut elo_check = Check::new("elo_sat equals the closed polynomials");
    for n in 1..=b.poly_n as i64 {
        for (j, &(from, f)) in lo.iter().enumerate() {
            if n >= from {
                let (a, p) = (formulas::lo_sat(n, j as i64), f(n));
                lo_check.case(a.is_ok() && a == p, || format!("n={n} j={j}: {} vs {}", show(&a), show(&p)));
            }
        }
        for (j, &(from, f)) in elo.iter().enumerate() {
            if n >= from {
                let (a, p) = (formulas::elo_sat(n, j as i64), f(n));
                elo_check.case(a.is_ok() && a == p, || format!("n={n} j={j}: {} vs {}", show(&a), show(&p)));
            }
        }
    }
    let mut seeds = Check::new("published seed values");
    seeds.eq(formulas::lo1(5).ok(), Some(ExactInt::from(4)), || "LO1(5)".into());
    for n in 0..=b.poly_n as i64 {
        let want = if n % 2 == 1 || n == 0 { 1 } else { n * (n + 2) / 8 };
        seeds.eq(formulas::lo0(n).ok(), Some(ExactInt::from(want)), || format!("LO0({n})"));
    }
    for n in 5..=b.poly_n as i64 {
        let want = if n % 2 == 0 { ExactInt::from(n - 3) } else { ExactInt::from((n * n * n - 3 * n * n - 7 * n + 69) / 12) };
        seeds.eq(formulas::elo0(n).ok(), Some(want), || format!("ELO0({n})"));
    }
    let mut oracle_check = Check::new("k-saturated counts equal oracle");
    for n in 1..=b.max_n {
        for j in 0..=2u32 {
            let o = oracle::count_k_saturated(n, j, ConstraintProfile::plain(2));
            let f = formulas::lo_sat(n as i64, j as i64);
            oracle_check.case(ok_eq(&f, &o), || format!("plain n={n} j={j}: {} vs oracle {o}", show(&f)));
            if n >= 3 {
                let o = oracle::count_k_saturated(n, j, ConstraintProfile::extended(2));
                let f = formulas::elo_sat(n as i64, j as i64);
                oracle_check.case(ok_eq(&f, &o), || format!("extended n={n} j={j}: {} vs oracle {o}", show(&f)));
            }
        }
    }
    vec![lo_check.done(), elo_check.done(), seeds.done(), oracle_check.done()]
}

pub fn partitions_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut c = Check::new("c_formula equals partition count");
    for l in 1..=b.max_l {
        for r in 0..=5u32 {
            for u in 0..=3u32 {
                for v in 0..=3u32 {
                    if r + v < 1 {
                        continue;
                    }
                    let f = formulas::c_formula(l as i64, r as i64, u as i64, v as i64);
                    let o = oracle::count_dual_ordered_partitions(l, r, u, v);
                    c.case(f.is_ok() && f == o, || {
                        format!("l={l} r={r} u={u} v={v}: formula {}, oracle {}", show(&f), show(&o))
                    });
                }
            }
        }
    }
    vec![c.done()]
}

fn class_of(i: usize) -> (PrimaryClass, Option<PrimaryClass>) {
    use PrimaryClass::*;
    match i {
        1 => (A1, Some(A1Mirror)),
        2 => (A2, Some(A2Mirror)),
        3 => (A3, Some(A3Mirror)),
        4 => (A4, None),
        5 => (A5, None),
        _ => (A6, None),
    }
}

pub fn components_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut paths = Check::new("component sum equals direct formula");
    for n in 6..=b.formula_n as i64 {
        for k in 3..=n / 2 {
            let (d, s) = (formulas::elo_direct(n, k), formulas::elo_components(n, k));
            paths.case(d.is_ok() && d == s, || format!("n={n} k={k}: direct {}, components {}", show(&d), show(&s)));
        }
    }
    let mut per_class = Check::new("s_i equals oracle count per primary class");
    let mut tiny = Check::new("s_4 misses only the single arc on three vertices");
    let mut complete = Check::new("every saturated extended stack has a primary class");
    for n in 1..=b.max_n {
        let unclassified = oracle::unclassified_saturated(n);
        let allowed: BTreeMap<(u32, u32), u64> = if n <= 2 {
            [((0, 0), 1)].into_iter().collect()
        } else {
            BTreeMap::new()
        };
        complete.eq(unclassified, allowed, || format!("n={n}"));
        if n < 3 {
            continue;
        }
        let counts = oracle::class_counts_by_k(n, n as usize / 2);
        for k in 1..=n / 2 {
            let row = &counts[k as usize];
            for i in 1..=6 {
                let (class, mirror) = class_of(i);
                let s = formulas::s_component(i, n as i64, k as i64);
                let want = &row[&class];
                if (n, k, i) == (3, 1, 4) {
                    tiny.case(ok_eq(&s, &ExactInt::from(0)) && *want == ExactInt::from(1), || {
                        format!("n=3 k=1 s4: {} vs oracle {want}", show(&s))
                    });
                    continue;
                }
                per_class.case(ok_eq(&s, want), || format!("n={n} k={k} s{i}: {} vs oracle {want}", show(&s)));
                if let Some(m) = mirror {
                    let want = &row[&m];
                    per_class.case(ok_eq(&s, want), || {
                        format!("n={n} k={k} s{i} (mirror): {} vs oracle {want}", show(&s))
                    });
                }
            }
        }
    }
    vec![paths.done(), per_class.done(), tiny.done(), complete.done()]
}

/// Random ordered tree on `vertices` vertices, grown by attaching each new
/// vertex at a random slot under a random existing vertex, then labelled by
/// a random permutation.
pub fn random_labelled_tree(rng: &mut impl Rng, vertices: usize) -> LinearTree {
    assert!(vertices >= 1);
    let mut kids: Vec<Vec<usize>> = vec![Vec::new()];
    for v in 1..vertices {
        let parent = rng.gen_range(0..v);
        let slot = rng.gen_range(0..=kids[parent].len());
        kids[parent].insert(slot, v);
        kids.push(Vec::new());
    }
    let mut labels: Vec<u32> = (1..=vertices as u32).collect();
    labels.shuffle(rng);
    fn build(v: usize, kids: &[Vec<usize>], labels: &[u32]) -> LinearTree {
        LinearTree::labelled(labels[v], kids[v].iter().map(|&c| build(c, kids, labels)).collect())
    }
    build(0, &kids, &labels)
}

fn random_permutation(rng: &mut impl Rng, lo: u32, hi: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (lo..=hi).collect();
    v.shuffle(rng);
    v
}

pub fn bijections_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let plain = ConstraintProfile::plain(2);
    let mut phi_rt = Check::new("phi_inv(phi(d)) = d on all 2-regular simple stacks");
    let mut shape = Check::new("tree vertex counts and visible vertices match the stack");
    let mut lengths = Check::new("innermost arcs match asterisk-free trees");
    for n in 1..=b.max_n.min(10) {
        let results = oracle::map_all(n, plain, false, |d| {
            let t = phi(d).expect("stack");
            let k = d.arc_count();
            let rt = phi_inv(&t, n).ok().as_ref() == Some(d);
            let counts = (t.vertex_count(), t.internal_count()) == (n as usize - k + 1, k + 1);
            let visible = visible_vertices(d).len() == t.children.iter().filter(|c| c.is_leaf()).count();
            let labels: Vec<u32> = (1..=t.vertex_count() as u32).collect();
            let f = stf(d, &labels).expect("labelling");
            let mut from_arcs: Vec<usize> = d
                .arcs()
                .iter()
                .filter(|&&(i, j)| d.arcs().iter().all(|&(a, c)| !(i < a && c < j)))
                .map(|&(i, j)| (j - i - 1) as usize)
                .collect();
            let mut from_trees: Vec<usize> = f
                .trees()
                .iter()
                .filter(|t| !t.has_asterisk() && k > 0)
                .map(|t| t.fiber.len())
                .collect();
            from_arcs.sort_unstable();
            from_trees.sort_unstable();
            (d.to_string(), rt, counts && visible, from_arcs == from_trees)
        });
        for (name, rt, sh, len) in results {
            phi_rt.case(rt, || format!("roundtrip fails on {name}"));
            shape.case(sh, || format!("tree shape or visibility mismatch on {name}"));
            lengths.case(len, || format!("arc lengths and fibers disagree on {name}"));
        }
    }
    let mut psi_rt = Check::new("psi_inv(psi(t)) = t on random labelled trees");
    for idx in 0..b.random_trees {
        let vertices = rng.gen_range(1..=12);
        let t = random_labelled_tree(&mut rng, vertices);
        let internal = t.internal_count().max(1) as u32;
        let f = psi(&t);
        let ok = match &f {
            Ok(f) => {
                f.class().ok() == Some((vertices as u32 + internal - 1, internal))
                    && psi_inv(f).ok().as_ref() == Some(&t)
            }
            Err(_) => false,
        };
        psi_rt.case(ok, || format!("tree #{idx}: {}", t.to_json()));
    }
    let mut stf_rt = Check::new("stf is a bijection onto its image");
    for n in 1..=b.materialize_n {
        for k in 0..=(n.saturating_sub(1)) / 2 {
            let mut seen = HashSet::new();
            let mut stacks = 0u64;
            let mut sat = 0u64;
            let mut sat_forests = 0u64;
            for d in oracle::enumerate_diagrams(n, k as usize, plain, false) {
                stacks += 1;
                let saturated = is_saturated(&d, &plain).expect("stack");
                sat += u64::from(saturated);
                for f in stf_all(&d, None).expect("stack") {
                    sat_forests += u64::from(check_saturated_forest(&f, 2));
                    seen.insert(f);
                }
            }
            let perms: u64 = (1..=(n - k + 1) as u64).product();
            stf_rt.eq(seen.len() as u64, stacks * perms, || format!("distinct forests at n={n} k={k}"));
            stf_rt.eq(sat_forests, sat * perms, || format!("saturated forests at n={n} k={k}"));
        }
    }
    let mut examples = Check::new("worked examples");
    worked_examples(&mut examples);
    vec![phi_rt.done(), shape.done(), lengths.done(), psi_rt.done(), stf_rt.done(), examples.done()]
}

/// The worked example stacks, labelling and forest.
pub mod fixtures {
    use super::*;

    pub fn simple_stack() -> Diagram {
        Diagram::new(21, [(1, 13), (2, 11), (3, 6), (7, 9), (14, 21), (17, 20)]).expect("valid")
    }

    pub fn extended_stack() -> Diagram {
        Diagram::new(21, [(1, 12), (1, 10), (2, 5), (6, 8), (13, 20), (16, 19)]).expect("valid")
    }

    /// Preorder labelling of the tree of [`simple_stack`].
    pub const LABELLING: [u32; 16] = [1, 2, 3, 8, 12, 4, 7, 13, 15, 10, 9, 5, 11, 16, 6, 14];

    pub fn forest() -> SmallForest {
        let p = ForestLabel::plain;
        let s = ForestLabel::star;
        SmallForest::new(vec![
            SmallTree::new(1, vec![s(22), s(18)]),
            SmallTree::new(2, vec![s(21), p(10)]),
            SmallTree::new(3, vec![s(19), s(20), p(15)]),
            SmallTree::new(7, vec![p(13)]),
            SmallTree::new(8, vec![p(12), p(4)]),
            SmallTree::new(9, vec![p(5), p(11), s(17)]),
            SmallTree::new(16, vec![p(6), p(14)]),
        ])
        .expect("valid")
    }

    /// Unlabelled tree of [`simple_stack`], built by hand.
    pub fn tree() -> LinearTree {
        let leaf = LinearTree::leaf;
        let node = LinearTree::node;
        node(vec![
            node(vec![
                node(vec![node(vec![leaf(), leaf()]), node(vec![leaf()]), leaf()]),
                leaf(),
            ]),
            node(vec![leaf(), leaf(), node(vec![leaf(), leaf()])]),
        ])
    }
}

fn worked_examples(c: &mut Check) {
    use fixtures::*;
    let tree = phi(&simple_stack());
    c.eq(tree.as_ref().map(LinearTree::to_json).ok(), Some(tree_json()), || "phi of the simple stack".into());
    let f = stf(&simple_stack(), &LABELLING);
    c.eq(f.as_ref().map(SmallForest::to_json).ok(), Some(forest().to_json()), || "stf".into());
    let e = estf(&extended_stack(), &LABELLING[3..]);
    c.eq(e.as_ref().map(SmallForest::to_json).ok(), Some(forest().to_json()), || "estf".into());
    let step = estf_step0(&extended_stack()).ok().map(|s| (s.diagram, s.d, s.k1));
    c.eq(step, Some((simple_stack(), 0, 2)), || "estf step 0".into());
    c.eq(
        crate::stf::estf_rest_size(&extended_stack()).ok(),
        Some(13),
        || "eSTF labelling count".into(),
    );
    c.eq(
        estf_inverse(&forest(), PrimaryClass::A1).ok(),
        Some(extended_stack()),
        || "estf inverse".into(),
    );
    c.eq(stf_inverse(&forest()).ok(), Some((simple_stack(), LABELLING.to_vec())), || "stf inverse".into());
}

fn tree_json() -> String {
    fixtures::tree().to_json()
}

/// Applies one random edit to the forest: moves a fiber label, swaps two
/// fiber labels, or swaps a fiber label with a root.
pub fn mutate(rng: &mut impl Rng, f: &SmallForest) -> Option<SmallForest> {
    let mut trees: Vec<SmallTree> = f.trees().to_vec();
    let filled: Vec<usize> = (0..trees.len()).filter(|&i| !trees[i].fiber.is_empty()).collect();
    let &a = filled.choose(rng)?;
    match rng.gen_range(0..3) {
        0 => {
            let pos = rng.gen_range(0..trees[a].fiber.len());
            let label = trees[a].fiber.remove(pos);
            let t = rng.gen_range(0..trees.len());
            let slot = rng.gen_range(0..=trees[t].fiber.len());
            trees[t].fiber.insert(slot, label);
        }
        1 => {
            let &b = filled.choose(rng)?;
            let (pa, pb) = (rng.gen_range(0..trees[a].fiber.len()), rng.gen_range(0..trees[b].fiber.len()));
            let (la, lb) = (trees[a].fiber[pa], trees[b].fiber[pb]);
            trees[a].fiber[pa] = lb;
            trees[b].fiber[pb] = la;
        }
        _ => {
            let pos = rng.gen_range(0..trees[a].fiber.len());
            let label = trees[a].fiber[pos];
            if label.asterisk {
                return None;
            }
            let t = rng.gen_range(0..trees.len());
            let root = trees[t].root;
            trees[t].root = label.value;
            trees[a].fiber[pos] = ForestLabel::plain(root);
        }
    }
    let m = SmallForest::new(trees).ok()?;
    (m != *f).then_some(m)
}

pub fn forests_suite(b: &Bounds) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed ^ 0xf0f0);
    let plain = ConstraintProfile::plain(2);
    let extended = ConstraintProfile::extended(2);
    let mut exact = Check::new("saturated-forest check holds exactly on images of saturated stacks");
    let mut images = Vec::new();
    for n in 1..=b.max_n.min(10) {
        let ds: Vec<Diagram> = (0..=n as usize / 2)
            .flat_map(|k| oracle::collect_diagrams(n, k, plain, false))
            .collect();
        for d in ds {
            let size = phi(&d).expect("stack").vertex_count() as u32;
            let labels = random_permutation(&mut rng, 1, size);
            let f = stf(&d, &labels).expect("labelling");
            let sat = is_saturated(&d, &plain).expect("stack");
            exact.eq(check_saturated_forest(&f, 2), sat, || format!("{d}"));
            if sat && size <= 12 {
                images.push(f);
            }
        }
    }
    let mut mutated = Check::new("mutated forests are judged by the stacks they decode to");
    let mut rejected = 0u64;
    let mut attempts = 0usize;
    while (rejected as usize) < b.mutations && attempts < 50 * b.mutations && !images.is_empty() {
        attempts += 1;
        let base = images.choose(&mut rng).expect("nonempty");
        let Some(m) = mutate(&mut rng, base) else { continue };
        let Ok((d, _)) = stf_inverse(&m) else { continue };
        let truth = is_saturated(&d, &plain).unwrap_or(false);
        let verdict = check_saturated_forest(&m, 2);
        mutated.eq(verdict, truth, || format!("mutant {m} decoding to {d}"));
        rejected += u64::from(!verdict);
    }
    mutated.case(rejected as usize >= b.mutations, || {
        format!("only {rejected} rejected mutants in {attempts} attempts")
    });

    let mut ext = Check::new("eSTF images of saturated extended stacks pass the extended check and invert");
    let mut ext_images = Vec::new();
    for n in 3..=b.max_n.min(10) {
        for k in 1..=n as usize / 2 {
            for d in oracle::collect_diagrams(n, k, extended, true) {
                let Ok(pc) = classify_terminals(&d) else {
                    ext.case(false, || format!("{d} has no primary class"));
                    continue;
                };
                let step = estf_step0(&d).expect("extended stack");
                let rest = step.diagram.n() as usize - k - step.k1 as usize;
                ext.eq(rest as i64, n as i64 + step.d as i64 - k as i64 - step.k1 as i64, || {
                    format!("labelling count for {d}")
                });
                let labels = random_permutation(&mut rng, step.k1 + 2, step.k1 + 1 + rest as u32);
                let f = estf(&d, &labels);
                let ok = match &f {
                    Ok(f) => {
                        check_extended_forest(f, n, step.d, k as u32, step.k1)
                            && estf_inverse(f, pc.class).ok().as_ref() == Some(&d)
                    }
                    Err(_) => false,
                };
                ext.case(ok, || format!("{d} ({}) -> {}", pc.class, show(&f)));
                if let Ok(f) = f {
                    ext_images.push((f, n, step.d, k as u32, step.k1));
                }
            }
        }
    }
    let mut ext_mut = Check::new("mutated eSTF images are rejected");
    let mut ext_rejected = 0u64;
    let mut attempts = 0usize;
    while (ext_rejected as usize) < b.mutations && attempts < 50 * b.mutations && !ext_images.is_empty() {
        attempts += 1;
        let (base, n, d, k, k1) = ext_images.choose(&mut rng).expect("nonempty");
        let Some(m) = mutate(&mut rng, base) else { continue };
        ext_rejected += u64::from(!check_extended_forest(&m, *n, *d, *k, *k1));
    }
    ext_mut.case(ext_rejected as usize >= b.mutations, || {
        format!("only {ext_rejected} rejected mutants in {attempts} attempts")
    });
    vec![exact.done(), mutated.done(), ext.done(), ext_mut.done()]
}
