mod common;

use std::sync::Arc;

use fusionkit::hom::{automorphism_classes, homomorphisms};
use fusionkit::{Caps, Catalog, FiniteGroup, Permutation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalog() -> Catalog {
    Catalog::builtin(Caps::default()).unwrap()
}

const SMALL: &[&str] = &[
    "C1", "C2", "C3", "C4", "C6", "D8", "Q8", "S3", "S4", "A4", "E4", "E8", "E9",
];

#[test]
fn element_sets_match_naive_closure() {
    let c = catalog();
    for name in SMALL {
        let (n, gens) = common::catalog_gens(name);
        let oracle = common::closure(n, &gens);
        let g = c.lookup(name).unwrap();
        let ours: Vec<Vec<usize>> = g.elements().iter().map(|p| p.images().to_vec()).collect();
        assert_eq!(ours, oracle.into_iter().collect::<Vec<_>>(), "{name}");
    }
}

#[test]
fn subgroup_counts_match_oracle() {
    let c = catalog();
    for name in SMALL {
        let (n, gens) = common::catalog_gens(name);
        let elements: Vec<_> = common::closure(n, &gens).into_iter().collect();
        let oracle = common::subgroups(n, &elements);
        let ours = c.lookup(name).unwrap().all_subgroups().unwrap();
        assert_eq!(ours.len(), oracle.len(), "{name}");
    }
}

#[test]
fn hom_counts_match_oracle() {
    let c = catalog();
    let pairs = [
        ("C2", "S3"),
        ("C3", "S3"),
        ("S3", "C2"),
        ("E4", "S4"),
        ("D8", "S4"),
        ("Q8", "D8"),
        ("C4", "Q8"),
        ("A4", "S4"),
        ("E4", "E4"),
    ];
    for (a, b) in pairs {
        let (n, qg) = common::catalog_gens(a);
        let (m, tg) = common::catalog_gens(b);
        let target: Vec<_> = common::closure(m, &tg).into_iter().collect();
        let oracle = common::homs(n, &qg, &target);
        let (ga, gb) = (c.lookup(a).unwrap(), c.lookup(b).unwrap());
        let all = homomorphisms(&ga, &gb, false).unwrap();
        let inj = homomorphisms(&ga, &gb, true).unwrap();
        assert_eq!(all.len(), oracle.len(), "{a}->{b}");
        assert_eq!(
            inj.len(),
            oracle.iter().filter(|h| common::is_injective(h)).count(),
            "{a}->{b} injective"
        );
        assert!(all.iter().all(|h| h.is_multiplicative()));
    }
}

#[test]
fn out_orders_match_oracle() {
    let c = catalog();
    for (name, expect) in [
        ("C2", 1),
        ("C3", 2),
        ("C4", 2),
        ("E4", 6),
        ("D8", 2),
        ("Q8", 6),
        ("S3", 1),
        ("E8", 168),
        ("E9", 48),
    ] {
        let (n, gens) = common::catalog_gens(name);
        assert_eq!(common::out_order(n, &gens), expect, "oracle {name}");
        let out = automorphism_classes(&c.lookup(name).unwrap()).unwrap().out;
        assert_eq!(out.order(), expect, "{name}");
    }
}

#[test]
fn out_multiplication_is_a_group_law() {
    let c = catalog();
    let out = automorphism_classes(&c.lookup("E8").unwrap()).unwrap().out;
    let n = out.order();
    for a in (0..n).step_by(7) {
        assert_eq!(out.mul(a, out.inverse(a)), 0);
        for b in (0..n).step_by(11) {
            for d in (0..n).step_by(13) {
                assert_eq!(out.mul(out.mul(a, b), d), out.mul(a, out.mul(b, d)));
            }
        }
    }
    assert_eq!(out.spanning_tree().len(), n);
}

#[test]
fn random_sylow_subgroups_are_conjugate_to_the_reference() {
    let c = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in c.entries() {
        let g = &e.group;
        for p in [2u64, 3, 5] {
            if g.order() % p as usize != 0 {
                continue;
            }
            let reference = g.sylow_subgroup(p).unwrap();
            for _ in 0..5 {
                let s = g.sylow_subgroup_random(p, &mut rng).unwrap();
                assert_eq!(s.order(), reference.order());
                let x = g.conjugator(&s, &reference).expect("Sylow subgroups are conjugate");
                assert_eq!(g.conjugate_subgroup_by(x, &s), reference);
            }
        }
    }
}

#[test]
fn caps_are_enforced() {
    let caps = Caps {
        max_order: 100,
        ..Caps::default()
    };
    let gens = vec![
        Permutation::parse_cycles(5, "(0 1)").unwrap(),
        Permutation::parse_cycles(5, "(0 1 2 3 4)").unwrap(),
    ];
    assert!(FiniteGroup::closure("S5", 5, gens, caps).is_err());
    let caps = Caps {
        max_subgroup_ambient: 20,
        ..Caps::default()
    };
    let s4 = Catalog::builtin(caps).unwrap().lookup("S4").unwrap();
    assert!(s4.all_subgroups().is_err());
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_order_matches_oracle(a in arb_perm(5), b in arb_perm(5)) {
        let gens = vec![Permutation::from_images(a.clone()).unwrap(), Permutation::from_images(b.clone()).unwrap()];
        let g = FiniteGroup::closure("G", 5, gens, Caps::default()).unwrap();
        let oracle = common::closure(5, &[a, b]);
        prop_assert_eq!(g.order(), oracle.len());
        for x in 0..g.order() {
            prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
    }

    #[test]
    fn subgroup_lattice_is_closed_under_conjugation(a in arb_perm(4), b in arb_perm(4)) {
        let gens = vec![Permutation::from_images(a).unwrap(), Permutation::from_images(b).unwrap()];
        let g = Arc::new(FiniteGroup::closure("G", 4, gens, Caps::default()).unwrap());
        let subs = g.all_subgroups().unwrap();
        for h in &subs {
            prop_assert_eq!(g.order() % h.order(), 0);
            for &s in g.generator_indices() {
                let k = g.conjugate_subgroup_by(s, h);
                prop_assert!(subs.binary_search(&k).is_ok());
            }
        }
        let classes = g.subgroup_conjugacy_classes().unwrap();
        prop_assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), subs.len());
    }
}
