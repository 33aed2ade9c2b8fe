//! Burnside modules `A(G, G')` of (G, G')-bisets: conjugacy classes of pairs
//! `(H, φ)` with `H ≤ G` and `φ: H → G'`, explicit bisets, and the stable
//! inclusion criterion comparing `[P, ι_Q∘φ]` with `[P, ι_P]`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{FiniteGroup, GroupId};
use crate::hom::{for_each_hom_table, HomFilter, HomKind, Homomorphism};
use crate::subgroup::Subgroup;

/// A (G, G')-pair: a subgroup `H ≤ G` and a homomorphism `φ: H → G'`.
///
/// `images[i]` is the `G'` index of `φ(h)` for the `i`-th member of `H`.
#[derive(Clone, Debug)]
pub struct BisetPair {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    subgroup: Subgroup,
    images: Vec<usize>,
}

impl BisetPair {
    /// Validates that `images` defines a homomorphism `H → G'`.
    pub fn new(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        subgroup: Subgroup,
        images: Vec<usize>,
    ) -> Result<Self> {
        if subgroup.ambient() != source.id() {
            return Err(Error::AmbientMismatch);
        }
        if images.len() != subgroup.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::NotAHomomorphism("image list has the wrong shape".into()));
        }
        let m = subgroup.members();
        for (a, &x) in m.iter().enumerate() {
            for (b, &y) in m.iter().enumerate() {
                let c = subgroup.position(source.mul(x, y)).ok_or(Error::NotASubgroup)?;
                if images[c] != target.mul(images[a], images[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "pair on {} is not multiplicative",
                        source.name()
                    )));
                }
            }
        }
        Ok(Self::from_valid(source.clone(), target.clone(), subgroup, images))
    }

    /// From a homomorphism whose source is a standalone copy of `subgroup`.
    pub fn from_hom(source: &Arc<FiniteGroup>, subgroup: Subgroup, phi: &Homomorphism) -> Result<Self> {
        let same_elements = subgroup.order() == phi.source().order()
            && subgroup
                .members()
                .iter()
                .zip(phi.source().elements())
                .all(|(&m, e)| source.element(m) == e);
        if subgroup.ambient() != source.id() || !same_elements {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::from_valid(
            source.clone(),
            phi.target().clone(),
            subgroup,
            phi.table().to_vec(),
        ))
    }

    fn from_valid(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, subgroup: Subgroup, images: Vec<usize>) -> Self {
        BisetPair {
            source,
            target,
            subgroup,
            images,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&x| x == 0)
    }

    /// `φ` as a homomorphism out of a standalone copy of `H`.
    pub fn phi(&self) -> Homomorphism {
        let h = Arc::new(
            self.source
                .subgroup_as_group(&self.subgroup, "H")
                .expect("pair subgroup lives in the source group"),
        );
        Homomorphism::from_valid_table(h, self.target.clone(), self.images.clone(), HomKind::General)
    }
}

/// Whether `(g, h) ∈ G × G'` carries pair `a` to pair `b`: `c_g(H_a) = H_b`
/// and `φ_b ∘ c_g = c_h ∘ φ_a` on `H_a`. Brute force over `G × G'`.
pub fn pairs_conjugate(a: &BisetPair, b: &BisetPair) -> Result<bool> {
    if a.source.id() != b.source.id() || a.target.id() != b.target.id() {
        return Err(Error::AmbientMismatch);
    }
    if a.subgroup.order() != b.subgroup.order() {
        return Ok(false);
    }
    let (g, t) = (&a.source, &a.target);
    for x in 0..g.order() {
        let moved: Option<Vec<usize>> = a
            .subgroup
            .members()
            .iter()
            .map(|&m| b.subgroup.position(g.conj(x, m)))
            .collect();
        let Some(moved) = moved else { continue };
        let found = (0..t.order()).any(|y| {
            moved
                .iter()
                .zip(&a.images)
                .all(|(&pos, &img)| b.images[pos] == t.conj(y, img))
        });
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One basis element `[K, φ]`. `K` is the least subgroup of its conjugacy
/// class and `φ` has the least image list in its orbit under `N_G(K) × G'`,
/// so `(K, φ)` is the least pair in its conjugacy class.
#[derive(Clone, Debug)]
pub struct BasisClass {
    pub subgroup: Subgroup,
    pub images: Vec<usize>,
    pub trivial: bool,
    /// Number of (G, G')-pairs in the class.
    pub pair_count: usize,
    subgroup_class: usize,
}

pub struct BurnsideBasis {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    classes: Vec<BasisClass>,
    trivial_flags: Arc<[bool]>,
    id: u64,
    /// Subgroup members -> (subgroup class, g with g H g⁻¹ = K).
    to_rep: HashMap<Vec<usize>, (usize, usize)>,
    /// (subgroup class, image list on K) -> basis class.
    lookup: HashMap<(usize, Vec<usize>), usize>,
}

impl std::fmt::Debug for BurnsideBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "A({}, {}) with {} classes ({} reduced)",
            self.source.name(),
            self.target.name(),
            self.classes.len(),
            self.reduced_rank()
        )
    }
}

/// Orbit of each image list on `K` under `N_G(K) × G'`.
struct SubgroupOrbits {
    classes: Vec<(Vec<usize>, usize)>,
    lookup: Vec<(Vec<usize>, usize)>,
}

fn orbits_on(g: &FiniteGroup, target: &Arc<FiniteGroup>, k: &Subgroup) -> Result<SubgroupOrbits> {
    let kg = g.subgroup_as_group(k, "K")?;
    let mut tables: Vec<Vec<usize>> = Vec::new();
    for_each_hom_table(&kg, target, HomFilter::All, |t| {
        tables.push(t.to_vec());
        ControlFlow::Continue(())
    })?;
    let normalizer = g.normalizer(k);
    // φ ↦ φ ∘ c_n⁻¹ permutes positions: new[pos(k)] = old[pos(n⁻¹ k n)]
    let position_perms: Vec<Vec<usize>> = g
        .subgroup_generators(&normalizer)
        .iter()
        .map(|&n| {
            let ni = g.inv(n);
            k.members()
                .iter()
                .map(|&x| k.position(g.conj(ni, x)).unwrap())
                .collect()
        })
        .collect();
    let target_gens = target.generator_indices().to_vec();

    let index: HashMap<&[usize], usize> = tables.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut orbit_of = vec![usize::MAX; tables.len()];
    let mut classes = Vec::new();
    // tables arrive in enumeration order; sort positions lexicographically so
    // the first unassigned table is least in its orbit
    let mut order: Vec<usize> = (0..tables.len()).collect();
    order.sort_by(|&a, &b| tables[a].cmp(&tables[b]));
    for &start in &order {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let c = classes.len();
        orbit_of[start] = c;
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let cur = &tables[queue[head]];
            head += 1;
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(position_perms.len() + target_gens.len());
            for perm in &position_perms {
                next.push(perm.iter().map(|&p| cur[p]).collect());
            }
            for &y in &target_gens {
                next.push(cur.iter().map(|&v| target.conj(y, v)).collect());
            }
            for t in next {
                let j = index[t.as_slice()];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = c;
                    queue.push(j);
                }
            }
        }
        classes.push((tables[start].clone(), queue.len()));
    }
    let lookup = tables.iter().cloned().zip(orbit_of).collect();
    Ok(SubgroupOrbits { classes, lookup })
}

pub fn burnside_basis(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Result<BurnsideBasis> {
    let g = source;
    let subs = g.all_subgroups()?;
    let sub_index: HashMap<&[usize], usize> = subs.iter().enumerate().map(|(i, s)| (s.members(), i)).collect();

    // subgroup conjugacy classes with a conjugator from each member to the representative
    let mut to_rep: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    let mut reps: Vec<(Subgroup, usize)> = Vec::new();
    let mut seen = vec![false; subs.len()];
    for i in 0..subs.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let c = reps.len();
        // entries (subgroup, x) with subgroup = x K x⁻¹
        let mut queue = vec![(i, g.identity())];
        let mut head = 0;
        while head < queue.len() {
            let (cur, x) = queue[head];
            head += 1;
            to_rep.insert(subs[cur].members().to_vec(), (c, g.inv(x)));
            for &s in g.generator_indices() {
                let next = g.conjugate_subgroup_by(s, &subs[cur]);
                let j = sub_index[next.members()];
                if !seen[j] {
                    seen[j] = true;
                    queue.push((j, g.mul(s, x)));
                }
            }
        }
        reps.push((subs[i].clone(), queue.len()));
    }

    let orbits: Vec<SubgroupOrbits> = reps
        .par_iter()
        .map(|(k, _)| orbits_on(g, target, k))
        .collect::<Result<_>>()?;

    let mut classes = Vec::new();
    let mut lookup = HashMap::new();
    for (c, ((k, conjugates), orb)) in reps.iter().zip(orbits).enumerate() {
        let base = classes.len();
        for (images, size) in orb.classes {
            classes.push(BasisClass {
                subgroup: k.clone(),
                trivial: images.iter().all(|&x| x == 0),
                images,
                pair_count: size * conjugates,
                subgroup_class: c,
            });
        }
        for (t, o) in orb.lookup {
            lookup.insert((c, t), base + o);
        }
    }
    let trivial_flags: Arc<[bool]> = classes.iter().map(|c| c.trivial).collect();
    let mut hasher = DefaultHasher::new();
    source.id().hash(&mut hasher);
    target.id().hash(&mut hasher);
    Ok(BurnsideBasis {
        source: source.clone(),
        target: target.clone(),
        classes,
        trivial_flags,
        id: hasher.finish(),
        to_rep,
        lookup,
    })
}

impl BurnsideBasis {
    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn classes(&self) -> &[BasisClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn trivial_flags(&self) -> &[bool] {
        &self.trivial_flags
    }

    /// Rank of the reduced module: classes whose `φ` is non-trivial.
    pub fn reduced_rank(&self) -> usize {
        self.trivial_flags.iter().filter(|&&t| !t).count()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn pair(&self, class: usize) -> BisetPair {
        let c = &self.classes[class];
        BisetPair::from_valid(
            self.source.clone(),
            self.target.clone(),
            c.subgroup.clone(),
            c.images.clone(),
        )
    }

    /// Index of the basis class containing `pair`.
    pub fn canonical_class(&self, pair: &BisetPair) -> Result<usize> {
        if pair.source.id() != self.source.id() || pair.target.id() != self.target.id() {
            return Err(Error::AmbientMismatch);
        }
        let &(c, x) = self.to_rep.get(pair.subgroup.members()).ok_or(Error::NotFound)?;
        let g = &self.source;
        let k = &self.classes[self.first_class_of(c)].subgroup;
        // pair moved by x: φ'(k) = φ(x⁻¹ k x)
        let xi = g.inv(x);
        let moved: Option<Vec<usize>> = k
            .members()
            .iter()
            .map(|&m| pair.subgroup.position(g.conj(xi, m)).map(|p| pair.images[p]))
            .collect();
        let moved = moved.ok_or(Error::NotFound)?;
        self.lookup.get(&(c, moved)).copied().ok_or(Error::NotFound)
    }

    fn first_class_of(&self, subgroup_class: usize) -> usize {
        self.classes.partition_point(|c| c.subgroup_class < subgroup_class)
    }

    pub fn zero(&self) -> BurnsideElement {
        BurnsideElement {
            basis: self.id,
            trivial: self.trivial_flags.clone(),
            coeffs: vec![0; self.classes.len()],
        }
    }

    pub fn basis_element(&self, class: usize) -> BurnsideElement {
        let mut e = self.zero();
        e.coeffs[class] = 1;
        e
    }

    pub fn element(&self, coeffs: Vec<i64>) -> Result<BurnsideElement> {
        if coeffs.len() != self.classes.len() {
            return Err(Error::BasisMismatch);
        }
        Ok(BurnsideElement {
            basis: self.id,
            trivial: self.trivial_flags.clone(),
            coeffs,
        })
    }

    /// Decomposes an explicit biset into orbits. For an orbit through `ω`,
    /// `H = {g : ω·g ∈ G'ω}` and `φ(g)` is the unique `x` with `ω·g = x·ω`.
    pub fn decompose(&self, biset: &ExplicitBiset) -> Result<BurnsideElement> {
        if biset.source.id() != self.source.id() || biset.target.id() != self.target.id() {
            return Err(Error::AmbientMismatch);
        }
        let (g, t) = (&self.source, &self.target);
        let n = biset.len();
        let mut done = vec![false; n];
        let mut e = self.zero();
        for omega in 0..n {
            if done[omega] {
                continue;
            }
            let left_orbit: HashMap<usize, usize> = (0..t.order()).map(|x| (biset.left(x, omega), x)).collect();
            let mut members = Vec::new();
            let mut images = Vec::new();
            for y in 0..g.order() {
                if let Some(&x) = left_orbit.get(&biset.right(omega, y)) {
                    members.push(y);
                    images.push(x);
                }
            }
            let h = g.subgroup_from_members(&members)?;
            let pair = BisetPair::new(g, t, h, images)?;
            e.coeffs[self.canonical_class(&pair)?] += 1;
            // mark the whole two-sided orbit
            let mut stack = vec![omega];
            done[omega] = true;
            while let Some(w) = stack.pop() {
                let nexts = t
                    .generator_indices()
                    .iter()
                    .map(|&x| biset.left(x, w))
                    .chain(g.generator_indices().iter().map(|&y| biset.right(w, y)))
                    .collect::<Vec<_>>();
                for v in nexts {
                    if !done[v] {
                        done[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        Ok(e)
    }

    pub fn dump(&self) -> BasisDump {
        let (g, t) = (&self.source, &self.target);
        BasisDump {
            source: g.name().to_string(),
            target: t.name().to_string(),
            rank: self.classes.len(),
            reduced_rank: self.reduced_rank(),
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| ClassDump {
                    index: i,
                    subgroup_order: c.subgroup.order(),
                    generators: g
                        .subgroup_generators(&c.subgroup)
                        .iter()
                        .map(|&x| g.element(x).to_string())
                        .collect(),
                    phi: c
                        .subgroup
                        .members()
                        .iter()
                        .zip(&c.images)
                        .map(|(&x, &y)| [g.element(x).to_string(), t.element(y).to_string()])
                        .collect(),
                    trivial: c.trivial,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDump {
    pub index: usize,
    pub subgroup_order: usize,
    pub generators: Vec<String>,
    /// `[h, φ(h)]` for every member of the subgroup.
    pub phi: Vec<[String; 2]>,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisDump {
    pub source: String,
    pub target: String,
    pub rank: usize,
    pub reduced_rank: usize,
    pub classes: Vec<ClassDump>,
}

/// An element of `A(G, G')` in the basis of pair classes.
#[derive(Clone, Debug)]
pub struct BurnsideElement {
    basis: u64,
    trivial: Arc<[bool]>,
    coeffs: Vec<i64>,
}

impl BurnsideElement {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(BurnsideElement {
            basis: self.basis,
            trivial: self.trivial.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn equal(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.coeffs == other.coeffs)
    }

    /// Equality in the reduced module, which ignores classes with trivial `φ`.
    pub fn reduced_equal(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.trivial.iter())
            .all(|((a, b), &t)| t || a == b))
    }
}

/// `G' ×_(H,φ) G`: pairs `(x, y) ∈ G' × G` modulo `(x, g·y) ∼ (x·φ(g), y)`
/// for `g ∈ H`, with `G'` acting on the left and `G` on the right.
pub struct ExplicitBiset {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    /// Least `(x, y)` representative of each element.
    points: Vec<(usize, usize)>,
    /// `left[x][i]` is `x·points[i]`.
    left: Vec<Vec<usize>>,
    /// `right[y][i]` is `points[i]·y`.
    right: Vec<Vec<usize>>,
}

impl std::fmt::Debug for ExplicitBiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {})-biset of size {}",
            self.target.name(),
            self.source.name(),
            self.points.len()
        )
    }
}

pub fn realize_biset(pair: &BisetPair) -> Result<ExplicitBiset> {
    let (g, t) = (&pair.source, &pair.target);
    let size = g.order() * t.order() / pair.subgroup.order();
    let limit = g.caps().max_biset;
    if size > limit {
        return Err(Error::CapExceeded {
            what: "explicit biset size",
            limit,
            actual: size,
        });
    }
    // (x, y) ∼ (x φ(h), h⁻¹ y) for h ∈ H
    let n_g = g.order();
    let mut class_of = vec![usize::MAX; t.order() * n_g];
    let mut points = Vec::with_capacity(size);
    for x in 0..t.order() {
        for y in 0..n_g {
            if class_of[x * n_g + y] != usize::MAX {
                continue;
            }
            let idx = points.len();
            points.push((x, y));
            for (&h, &img) in pair.subgroup.members().iter().zip(&pair.images) {
                let (x2, y2) = (t.mul(x, img), g.mul(g.inv(h), y));
                class_of[x2 * n_g + y2] = idx;
            }
        }
    }
    let left = (0..t.order())
        .map(|a| points.iter().map(|&(x, y)| class_of[t.mul(a, x) * n_g + y]).collect())
        .collect();
    let right = (0..n_g)
        .map(|b| points.iter().map(|&(x, y)| class_of[x * n_g + g.mul(y, b)]).collect())
        .collect();
    Ok(ExplicitBiset {
        source: g.clone(),
        target: t.clone(),
        points,
        left,
        right,
    })
}

/// Outcome of checking the defining properties of an explicit biset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisetCheck {
    pub free_left: bool,
    pub commuting: bool,
    pub actions: bool,
    pub size: usize,
}

impl ExplicitBiset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn left(&self, x: usize, i: usize) -> usize {
        self.left[x][i]
    }

    pub fn right(&self, i: usize, y: usize) -> usize {
        self.right[y][i]
    }

    /// Checks freeness of the left action on every element, that both are
    /// actions, and that they commute (on generators, which suffices).
    pub fn verify(&self) -> BisetCheck {
        let (g, t) = (&self.source, &self.target);
        let n = self.len();
        let free_left = (1..t.order()).all(|x| (0..n).all(|i| self.left[x][i] != i));
        let mut actions = (0..n).all(|i| self.left[0][i] == i && self.right[0][i] == i);
        for &a in t.generator_indices() {
            for b in 0..t.order() {
                actions &= (0..n).all(|i| self.left[a][self.left[b][i]] == self.left[t.mul(a, b)][i]);
            }
        }
        for &a in g.generator_indices() {
            for b in 0..g.order() {
                actions &= (0..n).all(|i| self.right[a][self.right[b][i]] == self.right[g.mul(b, a)][i]);
            }
        }
        let mut commuting = true;
        for &x in t.generator_indices() {
            for &y in g.generator_indices() {
                commuting &= (0..n).all(|i| self.right[y][self.left[x][i]] == self.left[x][self.right[y][i]]);
            }
        }
        BisetCheck {
            free_left,
            commuting,
            actions,
            size: n,
        }
    }

    /// Disjoint union; points of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &ExplicitBiset) -> Result<ExplicitBiset> {
        if self.source.id() != other.source.id() || self.target.id() != other.target.id() {
            return Err(Error::AmbientMismatch);
        }
        let shift = self.len();
        let join = |a: &[Vec<usize>], b: &[Vec<usize>]| -> Vec<Vec<usize>> {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().copied().chain(rb.iter().map(|&v| v + shift)).collect())
                .collect()
        };
        Ok(ExplicitBiset {
            source: self.source.clone(),
            target: self.target.clone(),
            points: self.points.iter().chain(&other.points).copied().collect(),
            left: join(&self.left, &other.left),
            right: join(&self.right, &other.right),
        })
    }
}

/// Decides `[P, ι_Q∘φ] = [P, ι_P]` in `A(P, G)`, caching one basis per `P`.
pub struct StableInclusion {
    group: Arc<FiniteGroup>,
    bases: Mutex<HashMap<GroupId, Arc<CachedBasis>>>,
}

/// A standalone copy of `P` and the basis of `A(P, G)`.
type CachedBasis = (Arc<FiniteGroup>, BurnsideBasis);

impl StableInclusion {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        StableInclusion {
            group: group.clone(),
            bases: Mutex::new(HashMap::new()),
        }
    }

    fn basis_for(&self, p: &Subgroup) -> Result<Arc<CachedBasis>> {
        let pg = Arc::new(self.group.subgroup_as_group(p, "P")?);
        if let Some(b) = self.bases.lock().unwrap().get(&pg.id()) {
            return Ok(b.clone());
        }
        let basis = burnside_basis(&pg, &self.group)?;
        let entry = Arc::new((pg.clone(), basis));
        self.bases.lock().unwrap().insert(pg.id(), entry.clone());
        Ok(entry)
    }

    /// `phi[i]` is the position in `Q` of the image of the `i`-th member of `P`.
    pub fn equal_table(&self, p: &Subgroup, q: &Subgroup, phi: &[usize]) -> Result<bool> {
        let g = &self.group;
        if p.ambient() != g.id() || q.ambient() != g.id() {
            return Err(Error::AmbientMismatch);
        }
        if phi.len() != p.order() || phi.iter().any(|&x| x >= q.order()) {
            return Err(Error::AmbientMismatch);
        }
        let entry = self.basis_for(p)?;
        let (pg, basis) = (&entry.0, &entry.1);
        let whole = pg.whole();
        let through_q: Vec<usize> = phi.iter().map(|&x| q.members()[x]).collect();
        let a = BisetPair::new(pg, g, whole.clone(), through_q)?;
        let b = BisetPair::from_valid(pg.clone(), g.clone(), whole, p.members().to_vec());
        Ok(basis.canonical_class(&a)? == basis.canonical_class(&b)?)
    }
}

/// `[P, ι_Q∘φ] = [P, ι_P]` in `A(P, G)` for `P, Q ≤ S ≤ G` and `φ: P → Q`
/// given between standalone copies of `P` and `Q`.
pub fn stable_inclusion_equal(
    g: &Arc<FiniteGroup>,
    s: &Subgroup,
    p: &Subgroup,
    q: &Subgroup,
    phi: &Homomorphism,
) -> Result<bool> {
    if s.ambient() != g.id() || !p.is_subgroup_of(s) || !q.is_subgroup_of(s) {
        return Err(Error::AmbientMismatch);
    }
    let matches = |h: &Subgroup, copy: &FiniteGroup| {
        h.order() == copy.order() && h.members().iter().zip(copy.elements()).all(|(&m, e)| g.element(m) == e)
    };
    if !matches(p, phi.source()) || !matches(q, phi.target()) {
        return Err(Error::AmbientMismatch);
    }
    StableInclusion::new(g).equal_table(p, q, phi.table())
}

/// A disagreement between the stable inclusion criterion and fusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropDisagreement {
    pub source: usize,
    pub target: usize,
    pub table: Vec<usize>,
    pub stably_equal: bool,
    pub in_fusion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropCheck {
    pub group: String,
    pub prime: u64,
    pub objects: usize,
    pub triples: usize,
    pub disagreements: Vec<PropDisagreement>,
}

/// Compares the stable inclusion criterion with membership in the fusion
/// system for every `P, Q ≤ S` and every homomorphism `P → Q`. Objects are
/// indexed as in `FusionSystem::objects`.
pub fn check_stable_inclusion(f: &FusionSystem) -> Result<PropCheck> {
    let g = f.ambient();
    let oracle = StableInclusion::new(g);
    let n = f.objects().len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let per_pair: Vec<(usize, Vec<PropDisagreement>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (pi, qj) = (&f.objects()[i], &f.objects()[j]);
            let fused = f.hom_tables(i, j);
            let mut count = 0;
            let mut bad = Vec::new();
            let mut err = None;
            for_each_hom_table(f.object_group(i), f.object_group(j), HomFilter::All, |phi| {
                count += 1;
                match oracle.equal_table(pi, qj, phi) {
                    Ok(stable) => {
                        let in_fusion = fused.contains(phi);
                        if stable != in_fusion {
                            bad.push(PropDisagreement {
                                source: i,
                                target: j,
                                table: phi.to_vec(),
                                stably_equal: stable,
                                in_fusion,
                            });
                        }
                        ControlFlow::Continue(())
                    }
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            })?;
            match err {
                Some(e) => Err(e),
                None => Ok((count, bad)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(PropCheck {
        group: g.name().to_string(),
        prime: f.prime(),
        objects: n,
        triples: per_pair.iter().map(|r| r.0).sum(),
        disagreements: per_pair.into_iter().flat_map(|r| r.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Caps;
    use crate::perm::Permutation;

    fn group(name: &str, n: usize, gens: &[&str]) -> Arc<FiniteGroup> {
        Arc::new(
            FiniteGroup::closure(
                name,
                n,
                gens.iter().map(|s| Permutation::parse_cycles(n, s).unwrap()).collect(),
                Caps::default(),
            )
            .unwrap(),
        )
    }

    fn el(g: &FiniteGroup, s: &str) -> usize {
        g.index_of(&Permutation::parse_cycles(g.degree(), s).unwrap()).unwrap()
    }

    #[test]
    fn small_bases() {
        let c1 = group("C1", 1, &[]);
        let c2 = group("C2", 2, &["(0 1)"]);
        let c3 = group("C3", 3, &["(0 1 2)"]);
        let b = burnside_basis(&c2, &c2).unwrap();
        assert_eq!((b.len(), b.reduced_rank()), (3, 1));
        assert_eq!(b.trivial_flags().iter().filter(|&&t| t).count(), 2);
        let b = burnside_basis(&c3, &c3).unwrap();
        assert_eq!((b.len(), b.reduced_rank()), (4, 2));
        let b = burnside_basis(&c2, &c1).unwrap();
        assert_eq!((b.len(), b.reduced_rank()), (2, 0));
    }

    #[test]
    fn conjugate_transposition_pairs() {
        let s3 = group("S3", 3, &["(0 1)", "(0 1 2)"]);
        let c2 = group("C2", 2, &["(0 1)"]);
        let h1 = s3.generate(&[el(&s3, "(0 1)")]);
        let h2 = s3.generate(&[el(&s3, "(1 2)")]);
        let a = BisetPair::new(&s3, &c2, h1, vec![0, 1]).unwrap();
        let b = BisetPair::new(&s3, &c2, h2, vec![0, 1]).unwrap();
        assert!(pairs_conjugate(&a, &b).unwrap());
        let basis = burnside_basis(&s3, &c2).unwrap();
        assert_eq!(basis.canonical_class(&a).unwrap(), basis.canonical_class(&b).unwrap());
    }

    #[test]
    fn identity_and_inversion_differ_in_c3() {
        let c3 = group("C3", 3, &["(0 1 2)"]);
        let w = c3.whole();
        let id = BisetPair::new(&c3, &c3, w.clone(), vec![0, 1, 2]).unwrap();
        let inv = BisetPair::new(&c3, &c3, w, vec![0, 2, 1]).unwrap();
        assert!(pairs_conjugate(&id, &id).unwrap());
        assert!(!pairs_conjugate(&id, &inv).unwrap());
        let basis = burnside_basis(&c3, &c3).unwrap();
        assert_ne!(
            basis.canonical_class(&id).unwrap(),
            basis.canonical_class(&inv).unwrap()
        );
        for i in 0..basis.len() {
            assert_eq!(basis.canonical_class(&basis.pair(i)).unwrap(), i);
        }
    }

    #[test]
    fn pair_validation() {
        let c3 = group("C3", 3, &["(0 1 2)"]);
        let c2 = group("C2", 2, &["(0 1)"]);
        assert!(BisetPair::new(&c3, &c2, c3.whole(), vec![0, 1, 1]).is_err());
        assert!(BisetPair::new(&c3, &c2, c3.whole(), vec![0, 0]).is_err());
    }

    #[test]
    fn biset_sizes_and_decomposition() {
        let c2 = group("C2", 2, &["(0 1)"]);
        let basis = burnside_basis(&c2, &c2).unwrap();
        let sizes: Vec<usize> = (0..basis.len())
            .map(|i| realize_biset(&basis.pair(i)).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![4, 2, 2]);
        for i in 0..basis.len() {
            let b = realize_biset(&basis.pair(i)).unwrap();
            let check = b.verify();
            assert!(check.free_left && check.commuting && check.actions);
            assert!(basis.decompose(&b).unwrap().equal(&basis.basis_element(i)).unwrap());
        }
        let u = realize_biset(&basis.pair(0))
            .unwrap()
            .disjoint_union(&realize_biset(&basis.pair(2)).unwrap())
            .unwrap();
        let sum = basis.basis_element(0).add(&basis.basis_element(2)).unwrap();
        assert!(basis.decompose(&u).unwrap().equal(&sum).unwrap());
    }

    #[test]
    fn reduced_equality_ignores_trivial_classes() {
        let c2 = group("C2", 2, &["(0 1)"]);
        let basis = burnside_basis(&c2, &c2).unwrap();
        let t = basis.trivial_flags().iter().position(|&t| t).unwrap();
        let a = basis.zero();
        let b = basis.basis_element(t);
        assert!(!a.equal(&b).unwrap());
        assert!(a.reduced_equal(&b).unwrap());
        let other = burnside_basis(&c2, &group("C3", 3, &["(0 1 2)"])).unwrap();
        assert_eq!(a.add(&other.zero()).unwrap_err(), Error::BasisMismatch);
    }

    #[test]
    fn biset_cap() {
        let caps = Caps {
            max_biset: 10,
            ..Caps::default()
        };
        let s3 = Arc::new(group("S3", 3, &["(0 1)", "(0 1 2)"]).with_caps(caps));
        let pair = BisetPair::new(&s3, &s3, s3.trivial_subgroup(), vec![0]).unwrap();
        assert!(matches!(realize_biset(&pair), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn stable_inclusion_examples() {
        let s3 = group("S3", 3, &["(0 1)", "(0 1 2)"]);
        let c6 = group("C6", 6, &["(0 1 2 3 4 5)"]);
        for (g, expect_inversion) in [(s3, true), (c6, false)] {
            let s = g.sylow_subgroup(3).unwrap();
            let pg = Arc::new(g.subgroup_as_group(&s, "P").unwrap());
            let id = Homomorphism::identity(&pg);
            assert!(stable_inclusion_equal(&g, &s, &s, &s, &id).unwrap());
            let inv = Homomorphism::new(
                pg.clone(),
                pg.clone(),
                (0..3).map(|x| pg.inv(x)).collect(),
                HomKind::General,
            )
            .unwrap();
            assert_eq!(stable_inclusion_equal(&g, &s, &s, &s, &inv).unwrap(), expect_inversion);
        }
    }

    #[test]
    fn prop_scan_on_s3() {
        let s3 = group("S3", 3, &["(0 1)", "(0 1 2)"]);
        for p in [2, 3] {
            let f = FusionSystem::build(&s3, p).unwrap();
            let check = check_stable_inclusion(&f).unwrap();
            assert!(check.triples > 0);
            assert!(check.disagreements.is_empty());
        }
    }
}
