use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satstack::diagram::{addable_arcs, classify, is_saturated, visible_vertices};
use satstack::forest::{check_saturated_forest, psi, psi_inv};
use satstack::primary::primary_component;
use satstack::stf::{check_extended_forest, estf, estf_inverse, estf_step0, stf, stf_inverse};
use satstack::tree::{phi, phi_inv};
use satstack::verify::random_labelled_tree;
use satstack::{oracle, ConstraintProfile, Diagram, ExactInt, PrimaryClass};

/// A uniformly chosen diagram of the family on `n` vertices.
fn pick(n: u32, p: ConstraintProfile, saturated: bool, index: usize) -> Diagram {
    let all: Vec<Diagram> = (0..=oracle::max_arcs(n, p) as usize)
        .flat_map(|k| oracle::collect_diagrams(n, k, p, saturated))
        .collect();
    all[index % all.len()].clone()
}

fn profiles() -> impl Strategy<Value = ConstraintProfile> {
    prop_oneof![
        (1u32..=4).prop_map(ConstraintProfile::plain),
        (1u32..=3).prop_map(ConstraintProfile::extended),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_preserves_family_and_saturation(n in 1u32..=10, p in profiles(), idx in any::<usize>()) {
        let d = pick(n, p, false, idx);
        let r = d.reflect();
        prop_assert!(classify(&r, &p).satisfies());
        prop_assert_eq!(is_saturated(&r, &p).unwrap(), is_saturated(&d, &p).unwrap());
        prop_assert_eq!(r.reflect(), d);
    }

    #[test]
    fn adding_an_addable_arc_stays_in_family(n in 1u32..=10, p in profiles(), idx in any::<usize>()) {
        let d = pick(n, p, false, idx);
        let addable = addable_arcs(&d, &p).unwrap();
        prop_assert_eq!(addable.is_empty(), is_saturated(&d, &p).unwrap());
        for a in addable {
            let bigger = Diagram::new(n, d.arcs().iter().copied().chain([a])).unwrap();
            prop_assert!(classify(&bigger, &p).satisfies());
        }
    }

    #[test]
    fn removing_an_arc_unsaturates(n in 2u32..=10, p in profiles(), idx in any::<usize>()) {
        let d = pick(n, p, true, idx);
        for &a in d.arcs() {
            let smaller = Diagram::new(n, d.arcs().iter().copied().filter(|&b| b != a)).unwrap();
            prop_assert!(!is_saturated(&smaller, &p).unwrap());
            prop_assert!(addable_arcs(&smaller, &p).unwrap().contains(&a));
        }
    }

    #[test]
    fn psi_roundtrip(seed in any::<u64>(), vertices in 1usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_labelled_tree(&mut rng, vertices);
        let f = psi(&t).unwrap();
        let internal = t.internal_count().max(1) as u32;
        prop_assert_eq!(f.class().unwrap(), (vertices as u32 + internal - 1, internal));
        prop_assert_eq!(psi_inv(&f).unwrap(), t);
    }

    #[test]
    fn tree_mirrors_stack(n in 1u32..=12, idx in any::<usize>()) {
        let d = pick(n, ConstraintProfile::plain(2), false, idx);
        let t = phi(&d).unwrap();
        let k = d.arc_count();
        prop_assert_eq!(t.vertex_count(), n as usize - k + 1);
        prop_assert_eq!(t.internal_count(), k + 1);
        prop_assert_eq!(visible_vertices(&d).len(), t.children.iter().filter(|c| c.is_leaf()).count());
        prop_assert_eq!(phi_inv(&t, n).unwrap(), d);
    }

    #[test]
    fn stf_roundtrip_and_saturation(n in 1u32..=12, idx in any::<usize>(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let d = pick(n, ConstraintProfile::plain(2), false, idx);
        let size = n - d.arc_count() as u32 + 1;
        let mut labels: Vec<u32> = (1..=size).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let f = stf(&d, &labels).unwrap();
        prop_assert_eq!(f.class().unwrap(), (n + 1, d.arc_count() as u32 + 1));
        prop_assert_eq!(check_saturated_forest(&f, 2), is_saturated(&d, &ConstraintProfile::plain(2)).unwrap());
        prop_assert_eq!(stf_inverse(&f).unwrap(), (d, labels));
    }

    #[test]
    fn estf_roundtrip(n in 3u32..=12, idx in any::<usize>(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let d = pick(n, ConstraintProfile::extended(2), true, idx);
        prop_assume!(d.arc_count() > 0);
        let step = estf_step0(&d).unwrap();
        let k = d.arc_count() as u32;
        let rest = step.diagram.n() - k - step.k1;
        let mut labels: Vec<u32> = (step.k1 + 2..=step.k1 + 1 + rest).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let f = estf(&d, &labels).unwrap();
        prop_assert!(check_extended_forest(&f, n, step.d, k, step.k1));
        let class = primary_component(&d).unwrap().class;
        prop_assert_eq!(estf_inverse(&f, class).unwrap(), d);
    }
}

#[test]
fn every_saturated_extended_stack_is_classified() {
    for n in 3..=12 {
        assert!(oracle::unclassified_saturated(n).is_empty(), "n={n}");
    }
}

#[test]
fn mirror_classes_are_equinumerous() {
    for n in 3..=12u32 {
        for row in oracle::class_counts_by_k(n, n as usize / 2) {
            for c in PrimaryClass::ALL {
                assert_eq!(row[&c], row[&c.mirror()], "n={n} {c:?}");
            }
        }
    }
}

#[test]
fn class_counts_sum_to_saturated_counts() {
    let p = ConstraintProfile::extended(2);
    for n in 3..=12u32 {
        let totals = oracle::count_by_k(n, p, true);
        for (k, row) in oracle::class_counts_by_k(n, n as usize / 2).into_iter().enumerate() {
            let sum: ExactInt = row.values().sum();
            assert_eq!(sum, totals[k], "n={n} k={k}");
        }
    }
}
