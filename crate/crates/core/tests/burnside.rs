mod common;

use std::sync::Arc;

use fusionkit::burnside::{burnside_basis, pairs_conjugate, realize_biset, BisetPair, StableInclusion};
use fusionkit::hom::{for_each_hom_table, HomFilter};
use fusionkit::{Caps, Catalog, FiniteGroup, FusionSystem};
use proptest::prelude::*;

fn catalog() -> Catalog {
    Catalog::builtin(Caps::default()).unwrap()
}

const PAIRS: &[(&str, &str)] = &[
    ("C2", "C2"),
    ("C3", "C3"),
    ("C2", "C1"),
    ("C1", "C2"),
    ("S3", "C2"),
    ("C2", "S3"),
    ("S3", "S3"),
    ("C4", "C2"),
    ("E4", "C2"),
    ("D8", "C2"),
    ("C2", "D8"),
    ("S3", "C3"),
    ("Q8", "C4"),
];

#[test]
fn class_counts_match_oracle() {
    let c = catalog();
    for &(a, b) in PAIRS {
        let (n, ga) = common::catalog_gens(a);
        let (m, gb) = common::catalog_gens(b);
        let (count, trivial) = common::burnside_counts(n, &ga, m, &gb);
        let basis = burnside_basis(&c.lookup(a).unwrap(), &c.lookup(b).unwrap()).unwrap();
        assert_eq!(basis.len(), count, "A({a},{b})");
        assert_eq!(
            basis.len() - basis.reduced_rank(),
            trivial,
            "A({a},{b}) trivial classes"
        );
    }
}

#[test]
fn class_sizes_sum_to_all_pairs() {
    let c = catalog();
    for &(a, b) in PAIRS.iter().chain(&[("S4", "C2"), ("A4", "C3"), ("D8", "S3")]) {
        let (g, t) = (c.lookup(a).unwrap(), c.lookup(b).unwrap());
        let basis = burnside_basis(&g, &t).unwrap();
        let mut total = 0;
        for h in g.all_subgroups().unwrap() {
            let hg = g.subgroup_as_group(&h, "H").unwrap();
            for_each_hom_table(&hg, &t, HomFilter::All, |table| {
                let pair = BisetPair::new(&g, &t, h.clone(), table.to_vec()).unwrap();
                let k = basis.canonical_class(&pair).unwrap();
                assert!(pairs_conjugate(&pair, &basis.pair(k)).unwrap());
                total += 1;
                std::ops::ControlFlow::Continue(())
            })
            .unwrap();
        }
        let sum: usize = basis.classes().iter().map(|c| c.pair_count).sum();
        assert_eq!(sum, total, "A({a},{b})");
        for i in 0..basis.len() {
            assert_eq!(basis.canonical_class(&basis.pair(i)).unwrap(), i);
            for j in 0..i {
                assert!(!pairs_conjugate(&basis.pair(i), &basis.pair(j)).unwrap());
            }
        }
    }
}

#[test]
fn realized_bisets_are_well_formed_and_decompose_to_their_class() {
    let c = catalog();
    for &(a, b) in PAIRS.iter().chain(&[("S4", "S3"), ("A4", "C3")]) {
        let (g, t) = (c.lookup(a).unwrap(), c.lookup(b).unwrap());
        let basis = burnside_basis(&g, &t).unwrap();
        for i in 0..basis.len() {
            let pair = basis.pair(i);
            let biset = realize_biset(&pair).unwrap();
            let check = biset.verify();
            assert!(
                check.free_left && check.commuting && check.actions,
                "A({a},{b}) class {i}"
            );
            assert_eq!(check.size, g.order() * t.order() / pair.subgroup().order());
            let e = basis.decompose(&biset).unwrap();
            assert!(e.equal(&basis.basis_element(i)).unwrap());
        }
    }
}

#[test]
fn stable_inclusion_agrees_with_fusion_for_small_groups() {
    let c = catalog();
    for (name, p) in [("S3", 2), ("S3", 3), ("S4", 2), ("A4", 2), ("C6", 3), ("D8", 2)] {
        let g = c.lookup(name).unwrap();
        let f = FusionSystem::build(&g, p).unwrap();
        let oracle = StableInclusion::new(&g);
        for (i, pi) in f.objects().iter().enumerate() {
            for (j, qj) in f.objects().iter().enumerate() {
                let mut checked = 0;
                for_each_hom_table(f.object_group(i), f.object_group(j), HomFilter::All, |phi| {
                    let stable = oracle.equal_table(pi, qj, phi).unwrap();
                    assert_eq!(stable, f.hom_tables(i, j).contains(phi), "{name} p={p}");
                    checked += 1;
                    std::ops::ControlFlow::Continue(())
                })
                .unwrap();
                assert!(checked >= f.hom_count(i, j));
            }
        }
    }
}

fn random_pair(g: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>, pick: usize) -> BisetPair {
    let subs = g.all_subgroups().unwrap();
    let h = subs[pick % subs.len()].clone();
    let hg = g.subgroup_as_group(&h, "H").unwrap();
    let mut tables = Vec::new();
    for_each_hom_table(&hg, t, HomFilter::All, |x| {
        tables.push(x.to_vec());
        std::ops::ControlFlow::Continue(())
    })
    .unwrap();
    let images = tables[(pick / subs.len()) % tables.len()].clone();
    BisetPair::new(g, t, h, images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_conjugacy_is_an_equivalence(x in 0usize..10_000, y in 0usize..10_000, z in 0usize..10_000) {
        let c = catalog();
        let g = c.lookup("S3").unwrap();
        let t = c.lookup("S3").unwrap();
        let (a, b, d) = (random_pair(&g, &t, x), random_pair(&g, &t, y), random_pair(&g, &t, z));
        prop_assert!(pairs_conjugate(&a, &a).unwrap());
        prop_assert_eq!(pairs_conjugate(&a, &b).unwrap(), pairs_conjugate(&b, &a).unwrap());
        if pairs_conjugate(&a, &b).unwrap() && pairs_conjugate(&b, &d).unwrap() {
            prop_assert!(pairs_conjugate(&a, &d).unwrap());
        }
        let basis = burnside_basis(&g, &t).unwrap();
        prop_assert_eq!(
            basis.canonical_class(&a).unwrap() == basis.canonical_class(&b).unwrap(),
            pairs_conjugate(&a, &b).unwrap()
        );
    }
}
