//! Fusion systems `F_S(G)`: the category on the subgroups of a Sylow
//! `p`-subgroup `S` whose morphisms are the maps induced by conjugation in `G`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::{for_each_isomorphism, HomKind, Homomorphism};
use crate::subgroup::Subgroup;

/// Morphism tables map positions in the source object's member list to
/// positions in the target object's member list.
type Table = Vec<usize>;

pub struct FusionSystem {
    prime: u64,
    ambient: Arc<FiniteGroup>,
    base: Subgroup,
    base_group: Arc<FiniteGroup>,
    objects: Vec<Subgroup>,
    object_groups: Vec<Arc<FiniteGroup>>,
    object_index: HashMap<Vec<usize>, usize>,
    homs: Vec<Vec<BTreeSet<Table>>>,
}

impl std::fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "F_S({}) at p={} (|S|={}, {} objects)",
            self.ambient.name(),
            self.prime,
            self.base.order(),
            self.objects.len()
        )
    }
}

/// `{c_g|_P : g ∈ G, gPg⁻¹ ≤ Q}` as homomorphisms between standalone copies
/// of `P` and `Q`, deduplicated by table.
pub fn fusion_hom_set(g: &Arc<FiniteGroup>, p: &Subgroup, q: &Subgroup) -> Result<Vec<Homomorphism>> {
    if p.ambient() != g.id() || q.ambient() != g.id() {
        return Err(Error::AmbientMismatch);
    }
    let pg = Arc::new(g.subgroup_as_group(p, "P")?);
    let qg = Arc::new(g.subgroup_as_group(q, "Q")?);
    let tables = conjugation_tables(g, p, q);
    Ok(tables
        .into_iter()
        .map(|t| Homomorphism::from_valid_table(pg.clone(), qg.clone(), t, HomKind::Conjugation))
        .collect())
}

fn conjugation_tables(g: &FiniteGroup, p: &Subgroup, q: &Subgroup) -> BTreeSet<Table> {
    let mut out = BTreeSet::new();
    'outer: for x in 0..g.order() {
        let mut t = Vec::with_capacity(p.order());
        for &m in p.members() {
            match q.position(g.conj(x, m)) {
                Some(pos) => t.push(pos),
                None => continue 'outer,
            }
        }
        out.insert(t);
    }
    out
}

/// Which fusion-system axioms hold, from an exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub injective: bool,
    pub contains_base_fusion: bool,
    pub composition_closed: bool,
    pub restriction_closed: bool,
    pub morphisms: usize,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.injective && self.contains_base_fusion && self.composition_closed && self.restriction_closed
    }
}

impl FusionSystem {
    /// `F_S(G)` over the deterministic Sylow subgroup of `g`. When `p` does
    /// not divide `|G|` the base is trivial and there is one object.
    pub fn build(g: &Arc<FiniteGroup>, p: u64) -> Result<Self> {
        let s = g.sylow_subgroup(p)?;
        Self::over(g, &s, p)
    }

    /// `F_S(G)` over a given Sylow subgroup `s`.
    pub fn over(g: &Arc<FiniteGroup>, s: &Subgroup, p: u64) -> Result<Self> {
        if s.ambient() != g.id() {
            return Err(Error::AmbientMismatch);
        }
        let base_group = Arc::new(g.subgroup_as_group(s, format!("Syl{p}({})", g.name()))?);
        let objects: Vec<Subgroup> = base_group
            .all_subgroups()?
            .into_iter()
            .map(|h| {
                // base positions map monotonically to ambient indices
                let members: Vec<usize> = h.members().iter().map(|&k| s.members()[k]).collect();
                let bits = BitSet::from_indices(g.order(), &members);
                Subgroup::from_parts(g.id(), members, bits)
            })
            .collect();
        let object_groups = objects
            .iter()
            .enumerate()
            .map(|(i, h)| g.subgroup_as_group(h, format!("P{i}")).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, h)| (h.members().to_vec(), i))
            .collect();
        let n = objects.len();
        let mut homs = vec![vec![BTreeSet::new(); n]; n];
        for x in 0..g.order() {
            for (i, src) in objects.iter().enumerate() {
                let image: Vec<usize> = src.members().iter().map(|&m| g.conj(x, m)).collect();
                for (j, dst) in objects.iter().enumerate() {
                    if dst.order() < src.order() {
                        continue;
                    }
                    let t: Option<Table> = image.iter().map(|&y| dst.position(y)).collect();
                    if let Some(t) = t {
                        homs[i][j].insert(t);
                    }
                }
            }
        }
        Ok(FusionSystem {
            prime: p,
            ambient: g.clone(),
            base: s.clone(),
            base_group,
            objects,
            object_groups,
            object_index,
            homs,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    /// Standalone copy of the Sylow subgroup `S`.
    pub fn base_group(&self) -> &Arc<FiniteGroup> {
        &self.base_group
    }

    /// All subgroups of `S` in canonical order, as subgroups of the ambient group.
    pub fn objects(&self) -> &[Subgroup] {
        &self.objects
    }

    pub fn object_group(&self, i: usize) -> &Arc<FiniteGroup> {
        &self.object_groups[i]
    }

    pub fn object_of(&self, h: &Subgroup) -> Option<usize> {
        if h.ambient() != self.ambient.id() {
            return None;
        }
        self.object_index.get(h.members()).copied()
    }

    pub fn hom_count(&self, i: usize, j: usize) -> usize {
        self.homs[i][j].len()
    }

    pub fn hom_tables(&self, i: usize, j: usize) -> &BTreeSet<Table> {
        &self.homs[i][j]
    }

    pub fn hom_set(&self, i: usize, j: usize) -> Vec<Homomorphism> {
        self.homs[i][j]
            .iter()
            .map(|t| {
                Homomorphism::from_valid_table(
                    self.object_groups[i].clone(),
                    self.object_groups[j].clone(),
                    t.clone(),
                    HomKind::Conjugation,
                )
            })
            .collect()
    }

    pub fn total_morphisms(&self) -> usize {
        self.homs.iter().flatten().map(BTreeSet::len).sum()
    }

    /// Number of objects of each order.
    pub fn object_order_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for o in &self.objects {
            *m.entry(o.order()).or_insert(0) += 1;
        }
        m
    }

    /// Sorted multiset of hom-set sizes over all ordered object pairs.
    pub fn hom_count_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.homs.iter().flatten().map(BTreeSet::len).collect();
        v.sort_unstable();
        v
    }

    /// Exhaustive check of the fusion-system axioms for groups.
    pub fn verify_axioms(&self) -> AxiomReport {
        let g = &self.ambient;
        let n = self.objects.len();
        let injective = self
            .homs
            .iter()
            .flatten()
            .flatten()
            .all(|t| t.iter().collect::<BTreeSet<_>>().len() == t.len());

        let mut contains_base_fusion = true;
        for &s in self.base.members() {
            for (i, src) in self.objects.iter().enumerate() {
                for (j, dst) in self.objects.iter().enumerate() {
                    let t: Option<Table> = src.members().iter().map(|&m| dst.position(g.conj(s, m))).collect();
                    if let Some(t) = t {
                        contains_base_fusion &= self.homs[i][j].contains(&t);
                    }
                }
            }
        }

        let mut composition_closed = true;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for phi in &self.homs[i][j] {
                        for psi in &self.homs[j][k] {
                            let t: Table = phi.iter().map(|&x| psi[x]).collect();
                            composition_closed &= self.homs[i][k].contains(&t);
                        }
                    }
                }
            }
        }

        let mut restriction_closed = true;
        for (i, big) in self.objects.iter().enumerate() {
            for (r, small) in self.objects.iter().enumerate() {
                if !small.is_subgroup_of(big) {
                    continue;
                }
                let into_big: Vec<usize> = small.members().iter().map(|&m| big.position(m).unwrap()).collect();
                for j in 0..n {
                    for phi in &self.homs[i][j] {
                        let t: Table = into_big.iter().map(|&x| phi[x]).collect();
                        restriction_closed &= self.homs[r][j].contains(&t);
                    }
                }
            }
        }

        AxiomReport {
            injective,
            contains_base_fusion,
            composition_closed,
            restriction_closed,
            morphisms: self.total_morphisms(),
        }
    }

    /// Machine-readable dump: objects with generators, then per-pair counts and tables.
    pub fn dump(&self) -> FusionDump {
        let g = &self.ambient;
        let objects = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, h)| ObjectDump {
                index: i,
                order: h.order(),
                generators: g
                    .subgroup_generators(h)
                    .iter()
                    .map(|&x| g.element(x).to_string())
                    .collect(),
                elements: h.members().iter().map(|&x| g.element(x).to_string()).collect(),
            })
            .collect();
        let n = self.objects.len();
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                morphisms.push(PairDump {
                    source: i,
                    target: j,
                    count: self.homs[i][j].len(),
                    tables: self.homs[i][j].iter().cloned().collect(),
                });
            }
        }
        FusionDump {
            group: g.name().to_string(),
            prime: self.prime,
            sylow_order: self.base.order(),
            sylow_generators: self
                .base_group
                .min_generators()
                .iter()
                .map(|&x| self.base_group.element(x).to_string())
                .collect(),
            objects,
            morphisms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectDump {
    pub index: usize,
    pub order: usize,
    pub generators: Vec<String>,
    pub elements: Vec<String>,
}

/// `tables[k][a] = b` means the k-th morphism sends element `a` of the source
/// object's element list to element `b` of the target's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairDump {
    pub source: usize,
    pub target: usize,
    pub count: usize,
    pub tables: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionDump {
    pub group: String,
    pub prime: u64,
    pub sylow_order: usize,
    pub sylow_generators: Vec<String>,
    pub objects: Vec<ObjectDump>,
    pub morphisms: Vec<PairDump>,
}

/// A verified isomorphism of fusion systems.
#[derive(Clone, Debug)]
pub struct FusionIsomorphism {
    pub gamma: Homomorphism,
    pub source_label: String,
    pub target_label: String,
}

/// How `gamma` moves objects: object map and per-object position maps.
struct Transport {
    object_map: Vec<usize>,
    positions: Vec<Vec<usize>>,
}

fn transport(gamma: &Homomorphism, f1: &FusionSystem, f2: &FusionSystem) -> Transport {
    let mut object_map = Vec::with_capacity(f1.objects.len());
    let mut positions = Vec::with_capacity(f1.objects.len());
    for p in &f1.objects {
        // ambient index -> position in S -> gamma -> position in S' -> ambient index of G'
        let img: Vec<usize> = p
            .members()
            .iter()
            .map(|&x| f2.base.members()[gamma.apply(f1.base.position(x).unwrap())])
            .collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        let j = f2.object_index[&sorted];
        let q = &f2.objects[j];
        positions.push(img.iter().map(|&y| q.position(y).unwrap()).collect());
        object_map.push(j);
    }
    Transport { object_map, positions }
}

/// For every pair of objects, `φ ∈ F1` implies `γ φ γ⁻¹ ∈ F2`, and every
/// morphism of F2 between image objects pulls back to F1.
fn transports_exactly(gamma: &Homomorphism, f1: &FusionSystem, f2: &FusionSystem) -> bool {
    let tr = transport(gamma, f1, f2);
    let n = f1.objects.len();
    let inverse_positions: Vec<Vec<usize>> = tr
        .positions
        .iter()
        .map(|pos| {
            let mut inv = vec![0; pos.len()];
            for (k, &v) in pos.iter().enumerate() {
                inv[v] = k;
            }
            inv
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            let (si, sj) = (tr.object_map[i], tr.object_map[j]);
            let (pi, pj) = (&tr.positions[i], &tr.positions[j]);
            if f1.homs[i][j].len() != f2.homs[si][sj].len() {
                return false;
            }
            for phi in &f1.homs[i][j] {
                let mut psi = vec![0; phi.len()];
                for (k, &v) in phi.iter().enumerate() {
                    psi[pi[k]] = pj[v];
                }
                if !f2.homs[si][sj].contains(&psi) {
                    return false;
                }
            }
            let (qi, qj) = (&inverse_positions[i], &inverse_positions[j]);
            for psi in &f2.homs[si][sj] {
                let mut phi = vec![0; psi.len()];
                for (a, &b) in psi.iter().enumerate() {
                    phi[qi[a]] = qj[b];
                }
                if !f1.homs[i][j].contains(&phi) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `gamma: S → S'` is an isomorphism of fusion systems `F1 → F2`.
pub fn is_fusion_isomorphism(gamma: &Homomorphism, f1: &FusionSystem, f2: &FusionSystem) -> Result<bool> {
    if f1.prime != f2.prime
        || gamma.source().id() != f1.base_group.id()
        || gamma.target().id() != f2.base_group.id()
        || gamma.inverse().is_none()
    {
        return Err(Error::BaseMismatch);
    }
    Ok(transports_exactly(gamma, f1, f2))
}

/// Outcome of a fusion-isomorphism search, with the reason for failure.
#[derive(Clone, Debug)]
pub struct FusionSearch {
    pub witness: Option<FusionIsomorphism>,
    /// Name of the prefilter that ruled out every isomorphism, if any.
    pub rejected_by: Option<&'static str>,
    pub isomorphisms_checked: usize,
}

pub fn search_fusion_isomorphism(f1: &FusionSystem, f2: &FusionSystem) -> Result<FusionSearch> {
    let reject = |why| FusionSearch {
        witness: None,
        rejected_by: Some(why),
        isomorphisms_checked: 0,
    };
    if f1.prime != f2.prime {
        return Ok(reject("primes differ"));
    }
    if f1.base.order() != f2.base.order() {
        return Ok(reject("Sylow orders differ"));
    }
    if f1.object_order_counts() != f2.object_order_counts() {
        return Ok(reject("subgroup counts per order differ"));
    }
    if f1.hom_count_profile() != f2.hom_count_profile() {
        return Ok(reject("hom-set cardinality multisets differ"));
    }
    let mut checked = 0;
    let mut witness = None;
    for_each_isomorphism(&f1.base_group, &f2.base_group, |gamma| {
        checked += 1;
        if transports_exactly(&gamma, f1, f2) {
            witness = Some(gamma);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let rejected_by = if checked == 0 {
        Some("Sylow subgroups are not isomorphic")
    } else {
        None
    };
    Ok(FusionSearch {
        witness: witness.map(|gamma| FusionIsomorphism {
            gamma,
            source_label: f1.ambient.name().to_string(),
            target_label: f2.ambient.name().to_string(),
        }),
        rejected_by,
        isomorphisms_checked: checked,
    })
}

pub fn find_fusion_isomorphism(f1: &FusionSystem, f2: &FusionSystem) -> Result<Option<FusionIsomorphism>> {
    Ok(search_fusion_isomorphism(f1, f2)?.witness)
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

    fn s3() -> Arc<FiniteGroup> {
        group("S3", 3, &["(0 1)", "(0 1 2)"])
    }

    #[test]
    fn hom_set_in_abelian_group_is_inclusion_only() {
        let c6 = group("C6", 6, &["(0 1 2 3 4 5)"]);
        let subs = c6.all_subgroups().unwrap();
        for p in &subs {
            for q in &subs {
                let homs = fusion_hom_set(&c6, p, q).unwrap();
                assert_eq!(homs.len(), usize::from(p.is_subgroup_of(q)));
            }
        }
    }

    #[test]
    fn sylow3_of_s3_has_two_automorphisms() {
        let g = s3();
        let p = g.sylow_subgroup(3).unwrap();
        let homs = fusion_hom_set(&g, &p, &p).unwrap();
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().all(|h| h.is_injective() && h.is_multiplicative()));
    }

    #[test]
    fn normal_klein_subgroup_of_s4_gets_all_automorphisms() {
        let s4 = group("S4", 4, &["(0 1)", "(0 1 2 3)"]);
        let v = s4
            .generate_by(&[
                Permutation::parse_cycles(4, "(0 1)(2 3)").unwrap(),
                Permutation::parse_cycles(4, "(0 2)(1 3)").unwrap(),
            ])
            .unwrap();
        assert_eq!(fusion_hom_set(&s4, &v, &v).unwrap().len(), 6);
    }

    #[test]
    fn ambient_mismatch() {
        let a = s3();
        let b = group("C3", 3, &["(0 1 2)"]);
        let h = b.whole();
        assert_eq!(fusion_hom_set(&a, &h, &h).unwrap_err(), Error::AmbientMismatch);
    }

    #[test]
    fn build_examples() {
        let c2 = group("C2", 2, &["(0 1)"]);
        let f = FusionSystem::build(&c2, 2).unwrap();
        assert_eq!(f.objects().len(), 2);
        assert_eq!(f.hom_count_profile(), vec![0, 1, 1, 1]);

        let f = FusionSystem::build(&s3(), 2).unwrap();
        assert_eq!(f.objects().len(), 2);
        assert_eq!(f.hom_count_profile(), vec![0, 1, 1, 1]);

        let f = FusionSystem::build(&s3(), 3).unwrap();
        let top = f.objects().len() - 1;
        assert_eq!(f.hom_count(top, top), 2);

        let f = FusionSystem::build(&c2, 3).unwrap();
        assert_eq!(f.objects().len(), 1);
        assert_eq!(f.total_morphisms(), 1);
    }

    #[test]
    fn axioms_hold_for_s4_and_s5() {
        for g in [
            group("S4", 4, &["(0 1)", "(0 1 2 3)"]),
            group("S5", 5, &["(0 1)", "(0 1 2 3 4)"]),
        ] {
            for p in [2, 3] {
                let f = FusionSystem::build(&g, p).unwrap();
                assert!(f.verify_axioms().all_hold(), "{f:?}");
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let c2 = group("C2", 2, &["(0 1)"]);
        let c3 = group("C3", 3, &["(0 1 2)"]);
        let c6 = group("C6", 6, &["(0 1 2 3 4 5)"]);
        let f_s3_2 = FusionSystem::build(&s3(), 2).unwrap();
        let f_c2 = FusionSystem::build(&c2, 2).unwrap();
        let f_s3_3 = FusionSystem::build(&s3(), 3).unwrap();
        let f_c3 = FusionSystem::build(&c3, 3).unwrap();
        let f_c6 = FusionSystem::build(&c6, 3).unwrap();

        let id = Homomorphism::identity(f_s3_3.base_group());
        assert!(is_fusion_isomorphism(&id, &f_s3_3, &f_s3_3).unwrap());

        for gamma in crate::hom::isomorphisms_between(f_s3_3.base_group(), f_c3.base_group()).unwrap() {
            assert!(!is_fusion_isomorphism(&gamma, &f_s3_3, &f_c3).unwrap());
        }
        let gamma = crate::hom::find_isomorphism(f_s3_2.base_group(), f_c2.base_group())
            .unwrap()
            .unwrap();
        assert!(is_fusion_isomorphism(&gamma, &f_s3_2, &f_c2).unwrap());

        assert!(find_fusion_isomorphism(&f_s3_2, &f_c2).unwrap().is_some());
        assert!(find_fusion_isomorphism(&f_s3_3, &f_c6).unwrap().is_none());
        assert!(find_fusion_isomorphism(&f_c6, &f_c6).unwrap().is_some());
        assert!(find_fusion_isomorphism(&f_c6, &f_c3).unwrap().is_some());
    }

    #[test]
    fn base_mismatch_is_reported() {
        let c3 = group("C3", 3, &["(0 1 2)"]);
        let f1 = FusionSystem::build(&c3, 3).unwrap();
        let f2 = FusionSystem::build(&s3(), 2).unwrap();
        let id = Homomorphism::identity(f1.base_group());
        assert_eq!(is_fusion_isomorphism(&id, &f1, &f2).unwrap_err(), Error::BaseMismatch);
    }

    #[test]
    fn inner_automorphisms_of_the_base_are_fusion_automorphisms() {
        let s4 = group("S4", 4, &["(0 1)", "(0 1 2 3)"]);
        let f = FusionSystem::build(&s4, 2).unwrap();
        let s = f.base_group().clone();
        for x in 0..s.order() {
            let c = Homomorphism::conjugation(&s, x);
            assert!(is_fusion_isomorphism(&c, &f, &f).unwrap());
        }
    }
}
