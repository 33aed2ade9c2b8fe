use std::sync::Arc;

use fusionkit::fusion::is_fusion_isomorphism;
use fusionkit::repmod::{linearize, modules_isomorphic, rep_set};
use fusionkit::{Caps, Catalog, Classifier, ClassifyOptions, Error, FiniteGroup, Witness};

fn catalog() -> Catalog {
    Catalog::builtin(Caps::default()).unwrap()
}

fn classifier(prefilters: bool) -> Classifier {
    Classifier::new(
        catalog(),
        ClassifyOptions {
            use_prefilters: prefilters,
            ..ClassifyOptions::default()
        },
    )
}

fn sylow_bound(a: &FiniteGroup, b: &FiniteGroup, p: u64) -> usize {
    let part = |n: usize| {
        let mut m = 1;
        let mut n = n;
        while n % p as usize == 0 {
            n /= p as usize;
            m *= p as usize;
        }
        m
    };
    part(a.order()).max(part(b.order())).max(p as usize)
}

#[test]
fn documented_examples() {
    let c = catalog();
    let g = |n: &str| c.lookup(n).unwrap();
    for prefilters in [true, false] {
        let k = classifier(prefilters);
        assert!(k.stable_equivalent_mp(&g("S3"), &g("C2"), 2).unwrap().equivalent);
        let v = k.stable_equivalent_mp(&g("S3"), &g("C3"), 3).unwrap();
        assert!(!v.equivalent);
        match v.witness {
            Some(Witness::DistinguishingQ { q, dims, .. }) => {
                assert_eq!(q, "C3");
                assert_eq!(dims, [1, 2]);
            }
            other => panic!("{other:?}"),
        }
        let v = k.condition2_bounded(&g("S3"), &g("C2"), 2, 2).unwrap();
        assert!(v.equivalent);
        assert_eq!(v.candidates.len(), 1);
        assert_eq!(v.candidates[0].dims, [2, 2]);
        assert!(!k.condition2_bounded(&g("S3"), &g("C3"), 3, 3).unwrap().equivalent);
        assert!(k.alternative_classification(&g("S3"), &g("C2"), 2).unwrap().equivalent);
        assert!(k.alternative_classification(&g("C6"), &g("C3"), 3).unwrap().equivalent);
        assert!(!k.alternative_classification(&g("S3"), &g("C6"), 3).unwrap().equivalent);
        assert!(k.distinguishing_search(&[g("C2"), g("S3")], 2).unwrap().is_empty());
        assert!(k.distinguishing_search(&[g("S4")], 2).unwrap().is_empty());
    }
}

#[test]
fn every_checker_accepts_self_comparison() {
    let c = catalog();
    for prefilters in [true, false] {
        let k = classifier(prefilters);
        for g in c.groups().iter().filter(|g| g.order() <= 24) {
            for p in [2u64, 3] {
                if g.order() % p as usize != 0 {
                    continue;
                }
                let bound = sylow_bound(g, g, p);
                assert!(k.stable_equivalent_mp(g, g, p).unwrap().equivalent, "{}", g.name());
                assert!(k.condition2_bounded(g, g, p, bound).unwrap().equivalent, "{}", g.name());
                assert!(
                    k.alternative_classification(g, g, p).unwrap().equivalent,
                    "{}",
                    g.name()
                );
            }
        }
    }
}

#[test]
fn prefilters_agree_with_full_computation() {
    let c = catalog();
    let (fast, full) = (classifier(true), classifier(false));
    let groups: Vec<Arc<FiniteGroup>> = c.groups().into_iter().filter(|g| g.order() <= 24).collect();
    for p in [2u64, 3] {
        for a in &groups {
            for b in &groups {
                let bound = sylow_bound(a, b, p);
                let x = fast.stable_equivalent_mp(a, b, p).unwrap().equivalent;
                let y = full.stable_equivalent_mp(a, b, p).unwrap().equivalent;
                assert_eq!(x, y, "{} {} p={p}", a.name(), b.name());
                let x = fast.condition2_bounded(a, b, p, bound).unwrap().equivalent;
                let y = full.condition2_bounded(a, b, p, bound).unwrap().equivalent;
                assert_eq!(x, y, "{} {} p={p}", a.name(), b.name());
            }
        }
    }
}

#[test]
fn abelian_catalog_has_no_distinguishing_pairs() {
    let c = catalog();
    let k = classifier(true);
    let abelian: Vec<Arc<FiniteGroup>> = c.groups().into_iter().filter(|g| g.is_abelian()).collect();
    assert!(abelian.len() > 10);
    for p in [2u64, 3] {
        assert!(k.distinguishing_search(&abelian, p).unwrap().is_empty());
    }
}

#[test]
fn verdict_witnesses_verify() {
    let c = catalog();
    let k = classifier(false);
    let groups: Vec<Arc<FiniteGroup>> = c.groups().into_iter().filter(|g| g.order() <= 24).collect();
    for p in [2u64, 3] {
        for a in &groups {
            for b in &groups {
                let alt = k.alternative_classification(a, b, p).unwrap();
                if alt.equivalent {
                    let gamma = &alt.fusion_witness.as_ref().unwrap().gamma;
                    let (f1, f2) = (k.fusion_system(a, p).unwrap(), k.fusion_system(b, p).unwrap());
                    assert!(is_fusion_isomorphism(gamma, &f1, &f2).unwrap());
                    assert!(alt.corollaries.as_ref().unwrap().unstable_equivalence);
                }
                let mp = k.stable_equivalent_mp(a, b, p).unwrap();
                if !mp.equivalent {
                    let Some(Witness::DistinguishingQ { q, dims, .. }) = &mp.witness else {
                        panic!("{} {} p={p}: {:?}", a.name(), b.name(), mp.witness);
                    };
                    assert!(mp.candidate_q.contains(q));
                    let qg = c.lookup(q).unwrap();
                    let ma = linearize(&Arc::new(rep_set(&qg, a, true).unwrap()), p).unwrap();
                    let mb = linearize(&Arc::new(rep_set(&qg, b, true).unwrap()), p).unwrap();
                    assert_eq!([ma.dim(), mb.dim()], *dims);
                    assert!(
                        !modules_isomorphic(&ma, &mb).unwrap(),
                        "{} {} p={p} Q={q}",
                        a.name(),
                        b.name()
                    );
                }
            }
        }
    }
}

#[test]
fn bound_errors() {
    let c = catalog();
    let k = classifier(true);
    let (a, b) = (c.lookup("S3").unwrap(), c.lookup("C2").unwrap());
    assert!(matches!(
        k.condition2_bounded(&a, &b, 2, 6),
        Err(Error::InvalidBound { .. })
    ));
    assert!(matches!(
        k.condition2_bounded(&a, &b, 2, 64),
        Err(Error::CatalogInsufficient(32))
    ));
    assert!(matches!(k.stable_equivalent_mp(&a, &b, 4), Err(Error::NotPrime(4))));
}
