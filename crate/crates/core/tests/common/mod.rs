//! Brute-force reference computations on raw image vectors. Nothing here
//! calls into the library's enumeration code; groups are closed by naive
//! saturation and everything else is done by exhaustive search.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type Perm = Vec<usize>;

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn conj(g: &Perm, x: &Perm) -> Perm {
    compose(&compose(g, x), &inverse(g))
}

/// Parses `"(0 1)(2 3)"` style cycles.
pub fn cycles(n: usize, text: &str) -> Perm {
    let mut p = identity(n);
    for cyc in text.split(')').filter(|c| c.contains('(')) {
        let pts: Vec<usize> = cyc
            .trim()
            .trim_start_matches('(')
            .split(|c: char| c == ' ' || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
            .collect();
        for k in 0..pts.len() {
            p[pts[k]] = pts[(k + 1) % pts.len()];
        }
    }
    p
}

/// Closure by repeated multiplication until nothing new appears.
pub fn closure(n: usize, gens: &[Perm]) -> BTreeSet<Perm> {
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    set.insert(identity(n));
    loop {
        let mut added = false;
        let current: Vec<Perm> = set.iter().cloned().collect();
        for a in &current {
            for g in gens {
                let c = compose(a, g);
                if set.insert(c) {
                    added = true;
                }
            }
        }
        if !added {
            return set;
        }
    }
}

/// Every subgroup, as closures of all sets of at most three elements.
pub fn subgroups(n: usize, elements: &[Perm]) -> BTreeSet<BTreeSet<Perm>> {
    let mut out = BTreeSet::new();
    let m = elements.len();
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                out.insert(closure(
                    n,
                    &[elements[i].clone(), elements[j].clone(), elements[k].clone()],
                ));
            }
        }
    }
    out
}

pub type Map = BTreeMap<Perm, Perm>;

/// Greedy generating list: add any element outside the closure so far.
pub fn small_gens(n: usize, h: &BTreeSet<Perm>) -> Vec<Perm> {
    let mut gens = Vec::new();
    let mut span = closure(n, &gens);
    for x in h {
        if !span.contains(x) {
            gens.push(x.clone());
            span = closure(n, &gens);
        }
    }
    gens
}

/// Every homomorphism `source → target`, by trying all images of a
/// generating list and checking the induced map on every pair.
pub fn homs(n: usize, source_gens: &[Perm], target: &[Perm]) -> Vec<Map> {
    let source: Vec<Perm> = closure(n, source_gens).into_iter().collect();
    let mut out = Vec::new();
    let k = source_gens.len();
    let m = target[0].len();
    let mut choice = vec![0usize; k];
    loop {
        // k = 0 visits the single empty choice
        if let Some(map) = extend(
            n,
            m,
            source_gens,
            &choice.iter().map(|&c| target[c].clone()).collect::<Vec<_>>(),
            &source,
        ) {
            out.push(map);
        }
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < target.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Extends generator images along words; `None` if inconsistent or not
/// multiplicative.
fn extend(n: usize, m: usize, gens: &[Perm], images: &[Perm], source: &[Perm]) -> Option<Map> {
    let mut map: Map = BTreeMap::new();
    map.insert(identity(n), identity(m));
    let mut frontier = vec![identity(n)];
    while let Some(x) = frontier.pop() {
        let fx = map[&x].clone();
        for (g, img) in gens.iter().zip(images) {
            let y = compose(&x, g);
            let fy = compose(&fx, img);
            match map.get(&y) {
                Some(prev) if *prev != fy => return None,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    frontier.push(y);
                }
            }
        }
    }
    for a in source {
        for b in source {
            if map[&compose(a, b)] != compose(&map[a], &map[b]) {
                return None;
            }
        }
    }
    Some(map)
}

pub fn is_injective(map: &Map) -> bool {
    map.values().collect::<BTreeSet<_>>().len() == map.len()
}

/// `{c_g|_P : gPg⁻¹ ⊆ Q}` as maps.
pub fn fusion_maps(group: &[Perm], p: &BTreeSet<Perm>, q: &BTreeSet<Perm>) -> BTreeSet<Map> {
    let mut out = BTreeSet::new();
    for g in group {
        let map: Map = p.iter().map(|x| (x.clone(), conj(g, x))).collect();
        if map.values().all(|y| q.contains(y)) {
            out.insert(map);
        }
    }
    out
}

/// Number of orbits of (G, G')-pairs `(H, φ)` under `(g, h)·(H, φ) =
/// (gHg⁻¹, c_h ∘ φ ∘ c_g⁻¹)`, and how many of them have trivial `φ`.
pub fn burnside_counts(n: usize, g_gens: &[Perm], m: usize, t_gens: &[Perm]) -> (usize, usize) {
    let g: Vec<Perm> = closure(n, g_gens).into_iter().collect();
    let t: Vec<Perm> = closure(m, t_gens).into_iter().collect();
    let mut pairs: Vec<(BTreeSet<Perm>, Map)> = Vec::new();
    for h in subgroups(n, &g) {
        for phi in homs(n, &small_gens(n, &h), &t) {
            pairs.push((h.clone(), phi));
        }
    }
    let index: HashMap<(BTreeSet<Perm>, Map), usize> = pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut orbit = vec![usize::MAX; pairs.len()];
    let mut count = 0;
    let mut trivial = 0;
    for i in 0..pairs.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        for x in &g {
            for y in &t {
                let (h, phi) = &pairs[i];
                let h2: BTreeSet<Perm> = h.iter().map(|a| conj(x, a)).collect();
                let phi2: Map = phi.iter().map(|(a, b)| (conj(x, a), conj(y, b))).collect();
                orbit[index[&(h2, phi2)]] = count;
            }
        }
        if pairs[i].1.values().all(|v| *v == identity(m)) {
            trivial += 1;
        }
        count += 1;
    }
    (count, trivial)
}

/// `|Hom(Q, G)/G|`, or of the injective part.
pub fn rep_count(n: usize, q_gens: &[Perm], m: usize, g_gens: &[Perm], injective: bool) -> usize {
    let g: Vec<Perm> = closure(m, g_gens).into_iter().collect();
    let all: Vec<Map> = homs(n, q_gens, &g)
        .into_iter()
        .filter(|h| !injective || is_injective(h))
        .collect();
    let mut classes: BTreeSet<Map> = BTreeSet::new();
    for h in &all {
        let least = g
            .iter()
            .map(|x| h.iter().map(|(a, b)| (a.clone(), conj(x, b))).collect::<Map>())
            .min()
            .unwrap();
        classes.insert(least);
    }
    classes.len()
}

/// `|Aut(Q)| / |Inn(Q)|`.
pub fn out_order(n: usize, q_gens: &[Perm]) -> usize {
    let q: Vec<Perm> = closure(n, q_gens).into_iter().collect();
    let aut = homs(n, q_gens, &q).into_iter().filter(is_injective).count();
    let inn: BTreeSet<Map> = q
        .iter()
        .map(|g| q.iter().map(|x| (x.clone(), conj(g, x))).collect())
        .collect();
    aut / inn.len()
}

/// Builtin catalog generators, copied here so the oracle does not depend on
/// the library's parser.
pub fn catalog_gens(name: &str) -> (usize, Vec<Perm>) {
    let entry: (usize, &[&str]) = match name {
        "C1" => (1, &[]),
        "C2" => (2, &["(0 1)"]),
        "C3" => (3, &["(0 1 2)"]),
        "C4" => (4, &["(0 1 2 3)"]),
        "C6" => (6, &["(0 1 2 3 4 5)"]),
        "D8" => (4, &["(0 1 2 3)", "(1 3)"]),
        "Q8" => (8, &["(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)"]),
        "S3" => (3, &["(0 1)", "(0 1 2)"]),
        "S4" => (4, &["(0 1)", "(0 1 2 3)"]),
        "A4" => (4, &["(0 1 2)", "(1 2 3)"]),
        "E4" => (4, &["(0 1)", "(2 3)"]),
        "E8" => (6, &["(0 1)", "(2 3)", "(4 5)"]),
        "E9" => (6, &["(0 1 2)", "(3 4 5)"]),
        other => panic!("no oracle generators for {other}"),
    };
    (entry.0, entry.1.iter().map(|s| cycles(entry.0, s)).collect())
}
