//! `Rep(Q, G) = Hom(Q, G)/G` and `InjRep(Q, G)` as Out(Q)-sets, their
//! permutation modules over `F_p`, and module isomorphism.
//!
//! Out(Q) acts on classes on the left by `α·[ρ] = [ρ ∘ α⁻¹]`.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::group::FiniteGroup;
use crate::hom::{automorphism_classes, for_each_hom_table, HomFilter, HomKind, Homomorphism, OutGroup};
use crate::subgroup::is_prime;

/// Name of the action convention, recorded in reports.
pub const ACTION_CONVENTION: &str = "left: alpha.[rho] = [rho o alpha^-1]";

/// Default seed for the randomized intertwiner search.
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Debug)]
pub struct RepSet {
    out: Arc<OutGroup>,
    target: Arc<FiniteGroup>,
    injective_only: bool,
    /// Least table of each G-conjugacy class, classes ordered by that table.
    classes: Vec<Vec<usize>>,
    /// Images of Q's generating sequence -> class index, for every homomorphism.
    class_of: HashMap<Vec<usize>, usize>,
    /// Permutation of classes for each generator of Out(Q).
    generator_actions: Vec<Vec<usize>>,
}

/// Rep(Q, G) or InjRep(Q, G), computing Out(Q) on the way.
pub fn rep_set(q: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>, injective_only: bool) -> Result<RepSet> {
    let out = automorphism_classes(q)?.out;
    rep_set_with(&out, g, injective_only)
}

/// Rep(Q, G) for a precomputed Out(Q).
pub fn rep_set_with(out: &Arc<OutGroup>, g: &Arc<FiniteGroup>, injective_only: bool) -> Result<RepSet> {
    let q = out.q();
    let gens = q.min_generators().to_vec();
    let filter = if injective_only {
        HomFilter::Injective
    } else {
        HomFilter::All
    };
    let mut tables: Vec<Vec<usize>> = Vec::new();
    for_each_hom_table(q, g, filter, |t| {
        tables.push(t.to_vec());
        ControlFlow::Continue(())
    })?;
    tables.sort();
    let key = |t: &[usize]| -> Vec<usize> { gens.iter().map(|&x| t[x]).collect() };
    let index: HashMap<Vec<usize>, usize> = tables.iter().enumerate().map(|(i, t)| (key(t), i)).collect();

    // G-conjugation acts on generator images componentwise
    let mut class_of_table = vec![usize::MAX; tables.len()];
    let mut classes = Vec::new();
    for start in 0..tables.len() {
        if class_of_table[start] != usize::MAX {
            continue;
        }
        let c = classes.len();
        class_of_table[start] = c;
        classes.push(tables[start].clone());
        let mut queue = vec![key(&tables[start])];
        while let Some(k) = queue.pop() {
            for &s in g.generator_indices() {
                let moved: Vec<usize> = k.iter().map(|&v| g.conj(s, v)).collect();
                let j = index[&moved];
                if class_of_table[j] == usize::MAX {
                    class_of_table[j] = c;
                    queue.push(moved);
                }
            }
        }
    }
    let class_of: HashMap<Vec<usize>, usize> = index.into_iter().map(|(k, i)| (k, class_of_table[i])).collect();
    let mut rs = RepSet {
        out: out.clone(),
        target: g.clone(),
        injective_only,
        classes,
        class_of,
        generator_actions: Vec::new(),
    };
    rs.generator_actions = out.generators().iter().map(|&a| rs.action_of(a)).collect();
    Ok(rs)
}

impl RepSet {
    pub fn q(&self) -> &Arc<FiniteGroup> {
        self.out.q()
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn out(&self) -> &Arc<OutGroup> {
        &self.out
    }

    pub fn injective_only(&self) -> bool {
        self.injective_only
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_tables(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> Homomorphism {
        Homomorphism::new(
            self.q().clone(),
            self.target.clone(),
            self.classes[i].clone(),
            HomKind::General,
        )
        .expect("class tables come from the enumeration")
    }

    /// Class of an arbitrary homomorphism table `Q → G`.
    pub fn class_of_table(&self, table: &[usize]) -> Option<usize> {
        let key: Vec<usize> = self.q().min_generators().iter().map(|&x| table[x]).collect();
        self.class_of.get(&key).copied()
    }

    /// Permutation of classes induced by the automorphism table `alpha`.
    pub fn action_of_automorphism(&self, alpha: &[usize]) -> Vec<usize> {
        let q = self.q();
        let mut inv = vec![0; alpha.len()];
        for (x, &y) in alpha.iter().enumerate() {
            inv[y] = x;
        }
        let gens = q.min_generators();
        self.classes
            .iter()
            .map(|rho| {
                let key: Vec<usize> = gens.iter().map(|&x| rho[inv[x]]).collect();
                self.class_of[&key]
            })
            .collect()
    }

    /// Permutation of classes induced by Out(Q) element `a`, through its
    /// least coset representative.
    pub fn action_of(&self, a: usize) -> Vec<usize> {
        self.action_of_automorphism(&self.out.representatives()[a])
    }

    pub fn generator_actions(&self) -> &[Vec<usize>] {
        &self.generator_actions
    }

    /// Images of one class under every Out(Q) element, indexed by element.
    fn orbit_map(&self, tree: &[(usize, usize, usize)], x: usize) -> Vec<usize> {
        let mut img = vec![usize::MAX; self.out.order()];
        for &(e, parent, k) in tree {
            img[e] = if k == usize::MAX {
                x
            } else {
                self.generator_actions[k][img[parent]]
            };
        }
        img
    }
}

/// Spanning tree of Out(Q) with `element = generator · parent`, root first,
/// so images of a point can be followed one generator at a time.
fn left_tree(out: &OutGroup) -> Vec<(usize, usize, usize)> {
    let mut seen = vec![false; out.order()];
    seen[0] = true;
    let mut tree = vec![(0, 0, usize::MAX)];
    let mut head = 0;
    while head < tree.len() {
        let x = tree[head].0;
        head += 1;
        for (k, &s) in out.generators().iter().enumerate() {
            let y = out.mul(s, x);
            if !seen[y] {
                seen[y] = true;
                tree.push((y, x, k));
            }
        }
    }
    tree
}

/// Number of fixed classes of every Out(Q) element.
fn fixed_point_counts(rs: &RepSet, tree: &[(usize, usize, usize)]) -> Vec<usize> {
    let mut counts = vec![0; rs.out.order()];
    for x in 0..rs.len() {
        for (e, &y) in rs.orbit_map(tree, x).iter().enumerate() {
            if y == x {
                counts[e] += 1;
            }
        }
    }
    counts
}

/// Whether `x` and `y` are isomorphic Out(Q)-sets: orbits pair up with
/// conjugate point stabilizers.
pub fn out_sets_isomorphic(x: &RepSet, y: &RepSet) -> Result<bool> {
    if x.q().id() != y.q().id() {
        return Err(Error::QMismatch);
    }
    if x.len() != y.len() {
        return Ok(false);
    }
    if x.target.id() == y.target.id() && x.injective_only == y.injective_only {
        return Ok(true);
    }
    let out = &x.out;
    let tree = left_tree(out);
    let orbit_types = |rs: &RepSet| -> Vec<Vec<usize>> {
        let mut done = vec![false; rs.len()];
        let mut stabs = Vec::new();
        for pt in 0..rs.len() {
            if done[pt] {
                continue;
            }
            let img = rs.orbit_map(&tree, pt);
            for &v in &img {
                done[v] = true;
            }
            stabs.push((0..out.order()).filter(|&e| img[e] == pt).collect());
        }
        stabs
    };
    let conjugate = |a: &[usize], b: &[usize]| -> bool {
        if a.len() != b.len() {
            return false;
        }
        (0..out.order()).any(|g| {
            let gi = out.inverse(g);
            a.iter().all(|&s| b.binary_search(&out.mul(out.mul(g, s), gi)).is_ok())
        })
    };
    let xs = orbit_types(x);
    let mut ys = orbit_types(y);
    if xs.len() != ys.len() {
        return Ok(false);
    }
    for s in &xs {
        match ys.iter().position(|t| conjugate(s, t)) {
            Some(i) => {
                ys.swap_remove(i);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Where a module came from, when it is a linearized Out(Q)-set.
#[derive(Clone, Debug)]
struct PermutationOrigin {
    rep_set: Arc<RepSet>,
}

/// A module over the group generated by the acting generators, given by one
/// invertible matrix per generator.
#[derive(Clone, Debug)]
pub struct MatrixModuleFp {
    p: u64,
    dim: usize,
    labels: Vec<String>,
    matrices: Vec<FpMatrix>,
    origin: Option<PermutationOrigin>,
}

/// Permutation module `F_p X` of an Out(Q)-set, one matrix per Out(Q) generator.
pub fn linearize(x: &Arc<RepSet>, p: u64) -> Result<MatrixModuleFp> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let out = &x.out;
    let labels = out
        .generators()
        .iter()
        .map(|&a| format!("{:?}", out.representative(a)))
        .collect();
    let matrices = x
        .generator_actions
        .iter()
        .map(|perm| FpMatrix::permutation(p, perm))
        .collect();
    Ok(MatrixModuleFp {
        p,
        dim: x.len(),
        labels,
        matrices,
        origin: Some(PermutationOrigin { rep_set: x.clone() }),
    })
}

impl MatrixModuleFp {
    /// A module from explicit matrices. Every matrix must be square of size
    /// `dim` and invertible.
    pub fn new(p: u64, dim: usize, labels: Vec<String>, matrices: Vec<FpMatrix>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if labels.len() != matrices.len() {
            return Err(Error::ActionMismatch);
        }
        for m in &matrices {
            if m.p() != p {
                return Err(Error::FieldMismatch(p, m.p()));
            }
            if m.rows() != dim || m.cols() != dim || !m.is_invertible() {
                return Err(Error::ActionMismatch);
            }
        }
        Ok(MatrixModuleFp {
            p,
            dim,
            labels,
            matrices,
            origin: None,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrices(&self) -> &[FpMatrix] {
        &self.matrices
    }

    /// The same module in the basis permuted by `perm`: new basis vector
    /// `perm[x]` is old basis vector `x`.
    pub fn permute_basis(&self, perm: &[usize]) -> MatrixModuleFp {
        let pm = FpMatrix::permutation(self.p, perm);
        let pinv = pm.transpose();
        MatrixModuleFp {
            p: self.p,
            dim: self.dim,
            labels: self.labels.clone(),
            matrices: self.matrices.iter().map(|m| pm.mul(m).mul(&pinv)).collect(),
            origin: None,
        }
    }

    /// `T` with `T·ρ_self(g) = ρ_other(g)·T` for every generator.
    pub fn is_intertwiner(&self, other: &MatrixModuleFp, t: &FpMatrix) -> bool {
        self.matrices
            .iter()
            .zip(&other.matrices)
            .all(|(a, b)| t.mul(a) == b.mul(t))
    }
}

/// How [`modules_isomorphic`] reached its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoMethod {
    Dimension,
    IdenticalAction,
    FixedPoints,
    Traces,
    SemisimpleCharacters,
    Intertwiner,
    EmptyIntertwinerSearch,
}

#[derive(Clone, Debug)]
pub struct IsoDecision {
    pub isomorphic: bool,
    pub method: IsoMethod,
    pub witness: Option<FpMatrix>,
}

fn check_compatible(m: &MatrixModuleFp, n: &MatrixModuleFp) -> Result<()> {
    if m.p != n.p {
        return Err(Error::FieldMismatch(m.p, n.p));
    }
    if m.labels != n.labels {
        return Err(Error::ActionMismatch);
    }
    Ok(())
}

pub fn modules_isomorphic(m: &MatrixModuleFp, n: &MatrixModuleFp) -> Result<bool> {
    Ok(decide_isomorphism(m, n, DEFAULT_SEED)?.isomorphic)
}

/// Largest Out(Q) whose elements are enumerated for fixed-point counts.
const ENUMERATE_OUT_LIMIT: usize = 20_000;
/// Below this many combinations, random tries are capped at the space size.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
/// Random intertwiners tried before falling back to exhaustive search.
const RANDOM_TRIES: usize = 64;

/// Decides module isomorphism and reports the method used.
///
/// Permutation modules from Rep sets are first compared by fixed-point
/// counts of every Out(Q) element; these are the Brauer-character values on
/// `p'`-elements, decisive when `p ∤ |Out(Q)|`, and fixed points of cyclic
/// subgroups, which are module invariants in every characteristic. Otherwise
/// an invertible element of the intertwiner space is searched for.
pub fn decide_isomorphism(m: &MatrixModuleFp, n: &MatrixModuleFp, seed: u64) -> Result<IsoDecision> {
    check_compatible(m, n)?;
    let done = |isomorphic, method| {
        Ok(IsoDecision {
            isomorphic,
            method,
            witness: None,
        })
    };
    if m.dim != n.dim {
        return done(false, IsoMethod::Dimension);
    }
    if m.matrices == n.matrices {
        return Ok(IsoDecision {
            isomorphic: true,
            method: IsoMethod::IdenticalAction,
            witness: Some(FpMatrix::identity(m.p, m.dim)),
        });
    }
    if m.matrices.iter().zip(&n.matrices).any(|(a, b)| a.trace() != b.trace()) {
        return done(false, IsoMethod::Traces);
    }
    if let (Some(a), Some(b)) = (&m.origin, &n.origin) {
        let out = &a.rep_set.out;
        if out.order() <= ENUMERATE_OUT_LIMIT && b.rep_set.out.q().id() == out.q().id() {
            let tree = left_tree(out);
            if fixed_point_counts(&a.rep_set, &tree) != fixed_point_counts(&b.rep_set, &tree) {
                return done(false, IsoMethod::FixedPoints);
            }
            if out.order() as u64 % m.p != 0 {
                return done(true, IsoMethod::SemisimpleCharacters);
            }
        }
    }
    let basis = match (&m.origin, &n.origin) {
        (Some(a), Some(b)) => orbital_basis(&a.rep_set, &b.rep_set, m.p),
        _ => intertwiner_basis(m, n),
    };
    let witness = search_invertible(&basis, m.p, seed);
    if let Some(t) = &witness {
        debug_assert!(m.is_intertwiner(n, t));
    }
    Ok(IsoDecision {
        isomorphic: witness.is_some(),
        method: if witness.is_some() {
            IsoMethod::Intertwiner
        } else {
            IsoMethod::EmptyIntertwinerSearch
        },
        witness,
    })
}

/// An invertible intertwiner `m → n`, if one exists.
pub fn find_module_isomorphism(m: &MatrixModuleFp, n: &MatrixModuleFp, seed: u64) -> Result<Option<FpMatrix>> {
    check_compatible(m, n)?;
    if m.dim != n.dim {
        return Ok(None);
    }
    if m.dim == 0 {
        return Ok(Some(FpMatrix::zeros(m.p, 0, 0)));
    }
    let basis = match (&m.origin, &n.origin) {
        (Some(a), Some(b)) => orbital_basis(&a.rep_set, &b.rep_set, m.p),
        _ => intertwiner_basis(m, n),
    };
    Ok(search_invertible(&basis, m.p, seed))
}

/// Basis of the intertwiners between permutation modules `F_p X → F_p Y`:
/// the indicator matrices of the Out(Q)-orbits on `Y × X`.
fn orbital_basis(x: &RepSet, y: &RepSet, p: u64) -> Vec<FpMatrix> {
    let (nx, ny) = (x.len(), y.len());
    let mut orbit = vec![usize::MAX; nx * ny];
    let mut basis = Vec::new();
    for start in 0..nx * ny {
        if orbit[start] != usize::MAX {
            continue;
        }
        let id = basis.len();
        orbit[start] = id;
        let mut t = FpMatrix::zeros(p, ny, nx);
        let mut stack = vec![start];
        while let Some(cell) = stack.pop() {
            let (yy, xx) = (cell / nx, cell % nx);
            t.set(yy, xx, 1);
            for (ax, ay) in x.generator_actions.iter().zip(&y.generator_actions) {
                let next = ay[yy] * nx + ax[xx];
                if orbit[next] == usize::MAX {
                    orbit[next] = id;
                    stack.push(next);
                }
            }
        }
        basis.push(t);
    }
    basis
}

/// Basis of `{T : T·A_i = B_i·T}` by solving the linear system in the
/// `dim²` entries of `T`.
fn intertwiner_basis(m: &MatrixModuleFp, n: &MatrixModuleFp) -> Vec<FpMatrix> {
    let d = m.dim;
    let p = m.p;
    let unknowns = d * d;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (a, b) in m.matrices.iter().zip(&n.matrices) {
        // (T A - B T)[i][j] = Σ_k T[i][k] A[k][j] - Σ_k B[i][k] T[k][j]
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0u64; unknowns];
                for k in 0..d {
                    row[i * d + k] = (row[i * d + k] + a.get(k, j)) % p;
                    row[k * d + j] = (row[k * d + j] + (p - b.get(i, k))) % p;
                }
                rows.push(row);
            }
        }
    }
    let solutions = if rows.is_empty() {
        (0..unknowns)
            .map(|u| {
                let mut v = vec![0; unknowns];
                v[u] = 1;
                v
            })
            .collect()
    } else {
        FpMatrix::from_rows(p, &rows).nullspace()
    };
    solutions
        .into_iter()
        .map(|v| FpMatrix::from_rows(p, &v.chunks(d.max(1)).map(<[u64]>::to_vec).collect::<Vec<_>>()))
        .collect()
}

fn combine(basis: &[FpMatrix], coeffs: &[u64]) -> FpMatrix {
    let first = &basis[0];
    let mut t = FpMatrix::zeros(first.p(), first.rows(), first.cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            t = t.add(&b.scale(c));
        }
    }
    t
}

/// Single basis elements, then seeded random combinations, then every
/// combination in odometer order. The answer is exact; only the running
/// time depends on the seed.
fn search_invertible(basis: &[FpMatrix], p: u64, seed: u64) -> Option<FpMatrix> {
    let first = basis.first()?;
    if first.rows() != first.cols() {
        return None;
    }
    // a basis element is often invertible on its own
    if let Some(t) = basis.iter().find(|t| t.is_invertible()) {
        return Some(t.clone());
    }
    let k = basis.len();
    let space = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = if space <= EXHAUSTIVE_LIMIT {
        RANDOM_TRIES.min(space as usize)
    } else {
        RANDOM_TRIES
    };
    for _ in 0..tries {
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let t = combine(basis, &coeffs);
        if t.is_invertible() {
            return Some(t);
        }
    }
    // exhaustive, odometer order
    let mut coeffs = vec![0u64; k];
    loop {
        let mut i = 0;
        while i < k {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == k {
            return None;
        }
        let t = combine(basis, &coeffs);
        if t.is_invertible() {
            return Some(t);
        }
    }
}

/// JSON view of a Rep set.
#[derive(Clone, Debug, Serialize)]
pub struct RepSetDump {
    pub q: String,
    pub g: String,
    pub injective_only: bool,
    pub convention: &'static str,
    pub out_order: usize,
    pub classes: Vec<Vec<[String; 2]>>,
    /// Generator images of each Out(Q) generator's representative.
    pub out_generators: Vec<Vec<[String; 2]>>,
    pub generator_actions: Vec<Vec<usize>>,
    /// Action of every Out(Q) element, when Out(Q) is small.
    pub element_actions: Option<Vec<Vec<usize>>>,
}

impl RepSet {
    pub fn dump(&self, element_limit: usize) -> RepSetDump {
        let pairs = |h: &Homomorphism| -> Vec<[String; 2]> {
            h.generator_images()
                .into_iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect()
        };
        RepSetDump {
            q: self.q().name().to_string(),
            g: self.target.name().to_string(),
            injective_only: self.injective_only,
            convention: ACTION_CONVENTION,
            out_order: self.out.order(),
            classes: (0..self.len()).map(|i| pairs(&self.class(i))).collect(),
            out_generators: self
                .out
                .generators()
                .iter()
                .map(|&a| pairs(&self.out.representative(a)))
                .collect(),
            generator_actions: self.generator_actions.clone(),
            element_actions: (self.out.order() <= element_limit)
                .then(|| (0..self.out.order()).map(|a| self.action_of(a)).collect()),
        }
    }
}
