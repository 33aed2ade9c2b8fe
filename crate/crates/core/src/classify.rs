//! Decision procedures for the two stable classifications of p-completed
//! classifying spaces.
//!
//! - stable equivalence: `F_p InjRep(Q, G) ≅ F_p InjRep(Q, G')` as
//!   Out(Q)-modules for every `p`-group `Q`;
//! - the same with `Rep` in place of `InjRep`, checked for catalog `Q` up to
//!   an order bound;
//! - fusion: an isomorphism of fusion systems `F_S(G) ≅ F_S'(G')`, which is
//!   also equivalent to a Sylow-compatible stable equivalence and to a
//!   homotopy equivalence of the p-completed classifying spaces.
//!
//! `InjRep(Q, G)` is empty unless `Q` embeds in a Sylow `p`-subgroup of `G`,
//! so the first condition only needs the subgroup types of the two Sylow
//! subgroups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::fusion::{search_fusion_isomorphism, FusionIsomorphism, FusionSystem};
use crate::group::{FiniteGroup, GroupId};
use crate::hom::{automorphism_classes, find_isomorphism, may_be_isomorphic, OutGroup};
use crate::repmod::{
    decide_isomorphism, linearize, rep_set_with, IsoMethod, MatrixModuleFp, RepSet, ACTION_CONVENTION,
};
use crate::subgroup::{is_power_of, is_prime, p_part};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    StableMp,
    FusionAlt,
    Condition2Bounded,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Images of generators of `S` in `S'`.
    FusionIsomorphism {
        generator_images: Vec<[String; 2]>,
    },
    /// A `p`-group whose modules differ; `dims` are for `G` and `G'`.
    DistinguishingQ {
        q: String,
        order: usize,
        generators: Vec<String>,
        dims: [usize; 2],
        method: IsoMethod,
    },
    SylowOrderMismatch {
        orders: [usize; 2],
    },
    /// Why no fusion isomorphism exists.
    FusionObstruction {
        reason: String,
        isomorphisms_checked: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateResult {
    pub q: String,
    pub order: usize,
    pub dims: [usize; 2],
    pub isomorphic: bool,
    pub method: IsoMethod,
}

/// Consequences of the fusion verdict that cannot be computed directly.
#[derive(Clone, Debug, Serialize)]
pub struct Corollaries {
    pub sylow_compatible_stable_equivalence: bool,
    pub unstable_equivalence: bool,
    pub note: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub groups: [String; 2],
    pub prime: u64,
    pub equivalent: bool,
    pub witness: Option<Witness>,
    pub candidate_q: Vec<String>,
    pub bound_note: String,
    pub candidates: Vec<CandidateResult>,
    pub corollaries: Option<Corollaries>,
    pub convention: &'static str,
    #[serde(skip)]
    pub fusion_witness: Option<FusionIsomorphism>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyOptions {
    /// Decide by Sylow orders and group identity before any module work.
    pub use_prefilters: bool,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            use_prefilters: true,
            seed: crate::repmod::DEFAULT_SEED,
        }
    }
}

/// One abstract `p`-group, used on both sides of every comparison.
struct QType {
    group: Arc<FiniteGroup>,
    out: Arc<OutGroup>,
    label: String,
}

type ModuleKey = (usize, GroupId, bool, u64);

/// Caches fusion systems, abstract `p`-group types and modules across
/// comparisons.
pub struct Classifier {
    catalog: Catalog,
    options: ClassifyOptions,
    fusion: Mutex<HashMap<(GroupId, u64), Arc<FusionSystem>>>,
    q_types: Mutex<Vec<Arc<QType>>>,
    sylow_types: Mutex<HashMap<(GroupId, u64), Vec<usize>>>,
    modules: Mutex<HashMap<ModuleKey, Arc<MatrixModuleFp>>>,
}

impl Classifier {
    /// `catalog` names abstract `p`-groups and supplies the condition (2)
    /// candidates.
    pub fn new(catalog: Catalog, options: ClassifyOptions) -> Self {
        Classifier {
            catalog,
            options,
            fusion: Mutex::new(HashMap::new()),
            q_types: Mutex::new(Vec::new()),
            sylow_types: Mutex::new(HashMap::new()),
            modules: Mutex::new(HashMap::new()),
        }
    }

    pub fn options(&self) -> ClassifyOptions {
        self.options
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn fusion_system(&self, g: &Arc<FiniteGroup>, p: u64) -> Result<Arc<FusionSystem>> {
        check_prime(p)?;
        if let Some(f) = self.fusion.lock().unwrap().get(&(g.id(), p)) {
            return Ok(f.clone());
        }
        let f = Arc::new(FusionSystem::build(g, p)?);
        Ok(self.fusion.lock().unwrap().entry((g.id(), p)).or_insert(f).clone())
    }

    /// Index of the abstract type of `h`, registering it if new. Catalog
    /// `p`-groups are registered first so they keep their names.
    fn q_type_of(&self, h: &Arc<FiniteGroup>, p: u64) -> Result<usize> {
        self.seed_q_types(p)?;
        let mut types = self.q_types.lock().unwrap();
        for (i, t) in types.iter().enumerate() {
            if t.group.id() == h.id() || (may_be_isomorphic(&t.group, h) && find_isomorphism(&t.group, h)?.is_some()) {
                return Ok(i);
            }
        }
        let label = format!(
            "Q{}#{}",
            h.order(),
            types.iter().filter(|t| t.group.order() == h.order()).count() + 1
        );
        let group = Arc::new(h.renamed(label.clone()));
        let out = automorphism_classes(&group)?.out;
        types.push(Arc::new(QType { group, out, label }));
        Ok(types.len() - 1)
    }

    fn seed_q_types(&self, p: u64) -> Result<()> {
        let mut types = self.q_types.lock().unwrap();
        for g in self.catalog.p_groups(p) {
            if types.iter().any(|t| t.group.id() == g.id()) {
                continue;
            }
            // skip catalog duplicates of an already registered type
            let mut dup = false;
            for t in types.iter() {
                if may_be_isomorphic(&t.group, &g) && find_isomorphism(&t.group, &g)?.is_some() {
                    dup = true;
                    break;
                }
            }
            if !dup {
                let out = automorphism_classes(&g)?.out;
                types.push(Arc::new(QType {
                    label: g.name().to_string(),
                    group: g,
                    out,
                }));
            }
        }
        Ok(())
    }

    fn q_type(&self, i: usize) -> Arc<QType> {
        self.q_types.lock().unwrap()[i].clone()
    }

    /// Abstract types of the non-trivial subgroups of a Sylow `p`-subgroup
    /// of `g`, by order then registration.
    fn sylow_subgroup_types(&self, g: &Arc<FiniteGroup>, p: u64) -> Result<Vec<usize>> {
        if let Some(v) = self.sylow_types.lock().unwrap().get(&(g.id(), p)) {
            return Ok(v.clone());
        }
        let f = self.fusion_system(g, p)?;
        let mut found: Vec<usize> = Vec::new();
        for (i, h) in f.objects().iter().enumerate() {
            if h.is_trivial() {
                continue;
            }
            let t = self.q_type_of(f.object_group(i), p)?;
            if !found.contains(&t) {
                found.push(t);
            }
        }
        self.sort_types(&mut found);
        self.sylow_types.lock().unwrap().insert((g.id(), p), found.clone());
        Ok(found)
    }

    fn sort_types(&self, v: &mut [usize]) {
        let types = self.q_types.lock().unwrap();
        v.sort_by_key(|&i| (types[i].group.order(), i));
    }

    fn module(&self, q: usize, g: &Arc<FiniteGroup>, injective: bool, p: u64) -> Result<Arc<MatrixModuleFp>> {
        let key = (q, g.id(), injective, p);
        if let Some(m) = self.modules.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let t = self.q_type(q);
        let rs: Arc<RepSet> = Arc::new(rep_set_with(&t.out, g, injective)?);
        let m = Arc::new(linearize(&rs, p)?);
        Ok(self.modules.lock().unwrap().entry(key).or_insert(m).clone())
    }

    fn compare_candidates(
        &self,
        g: &Arc<FiniteGroup>,
        g2: &Arc<FiniteGroup>,
        p: u64,
        candidates: &[usize],
        injective: bool,
    ) -> Result<Vec<(CandidateResult, Arc<QType>)>> {
        candidates
            .par_iter()
            .map(|&q| {
                let a = self.module(q, g, injective, p)?;
                let b = self.module(q, g2, injective, p)?;
                let d = decide_isomorphism(&a, &b, self.options.seed)?;
                let t = self.q_type(q);
                Ok((
                    CandidateResult {
                        q: t.label.clone(),
                        order: t.group.order(),
                        dims: [a.dim(), b.dim()],
                        isomorphic: d.isomorphic,
                        method: d.method,
                    },
                    t,
                ))
            })
            .collect()
    }

    /// Warms caches for a group so later parallel work registers no new
    /// `Q` types, keeping labels independent of scheduling.
    pub fn prepare(&self, g: &Arc<FiniteGroup>, p: u64) -> Result<()> {
        self.sylow_subgroup_types(g, p).map(|_| ())
    }

    pub fn stable_equivalent_mp(&self, g: &Arc<FiniteGroup>, g2: &Arc<FiniteGroup>, p: u64) -> Result<Verdict> {
        check_prime(p)?;
        let mut v = Verdict::new(VerdictKind::StableMp, g, g2, p);
        v.bound_note = "exact: InjRep(Q, -) is empty unless Q embeds in a Sylow subgroup, so only subgroup \
                        types of the two Sylow subgroups can distinguish"
            .into();
        let (s1, s2) = (p_part(g.order(), p), p_part(g2.order(), p));
        if self.options.use_prefilters {
            if g.id() == g2.id() {
                v.equivalent = true;
                v.bound_note.push_str("; identical groups");
                return Ok(v);
            }
            if s1 != s2 {
                // the larger Sylow subgroup embeds on one side only
                let (big, small, flip) = if s1 > s2 { (g, g2, false) } else { (g2, g, true) };
                let f = self.fusion_system(big, p)?;
                let top = f.objects().len() - 1;
                let q = self.q_type_of(f.object_group(top), p)?;
                let t = self.q_type(q);
                let a = self.module(q, big, true, p)?.dim();
                let b = self.module(q, small, true, p)?.dim();
                let dims = if flip { [b, a] } else { [a, b] };
                v.candidate_q = vec![t.label.clone()];
                v.witness = Some(Witness::DistinguishingQ {
                    q: t.label.clone(),
                    order: t.group.order(),
                    generators: generator_strings(&t.group),
                    dims,
                    method: IsoMethod::Dimension,
                });
                v.bound_note.push_str("; decided by Sylow orders");
                return Ok(v);
            }
        }
        let mut candidates = self.sylow_subgroup_types(g, p)?;
        for t in self.sylow_subgroup_types(g2, p)? {
            if !candidates.contains(&t) {
                candidates.push(t);
            }
        }
        self.sort_types(&mut candidates);
        let results = self.compare_candidates(g, g2, p, &candidates, true)?;
        v.fill_from(results);
        Ok(v)
    }

    pub fn condition2_bounded(
        &self,
        g: &Arc<FiniteGroup>,
        g2: &Arc<FiniteGroup>,
        p: u64,
        bound: usize,
    ) -> Result<Verdict> {
        check_prime(p)?;
        if !is_power_of(bound, p) {
            return Err(Error::InvalidBound { bound, p });
        }
        self.seed_q_types(p)?;
        let mut v = Verdict::new(VerdictKind::Condition2Bounded, g, g2, p);
        v.bound_note = format!("bounded: checks catalog {p}-groups of order <= {bound} only, not every {p}-group");
        let mut order = p as usize;
        while order <= bound {
            if !self.catalog.p_groups(p).iter().any(|q| q.order() == order) {
                return Err(Error::CatalogInsufficient(order));
            }
            order *= p as usize;
        }
        if self.options.use_prefilters {
            if g.id() == g2.id() {
                v.equivalent = true;
                v.bound_note.push_str("; identical groups");
                return Ok(v);
            }
            let (s1, s2) = (p_part(g.order(), p), p_part(g2.order(), p));
            if s1 != s2 {
                v.witness = Some(Witness::SylowOrderMismatch { orders: [s1, s2] });
                v.bound_note.push_str(
                    "; decided by Sylow orders, since this condition is equivalent to the exact InjRep check",
                );
                return Ok(v);
            }
        }
        let mut candidates = Vec::new();
        for q in self.catalog.p_groups(p) {
            if q.order() <= bound {
                let t = self.q_type_of(&q, p)?;
                if !candidates.contains(&t) {
                    candidates.push(t);
                }
            }
        }
        self.sort_types(&mut candidates);
        let results = self.compare_candidates(g, g2, p, &candidates, false)?;
        v.fill_from(results);
        Ok(v)
    }

    pub fn alternative_classification(&self, g: &Arc<FiniteGroup>, g2: &Arc<FiniteGroup>, p: u64) -> Result<Verdict> {
        check_prime(p)?;
        let mut v = Verdict::new(VerdictKind::FusionAlt, g, g2, p);
        v.bound_note = "exact: searches every isomorphism between the Sylow subgroups".into();
        let f1 = self.fusion_system(g, p)?;
        let f2 = self.fusion_system(g2, p)?;
        let search = search_fusion_isomorphism(&f1, &f2)?;
        v.equivalent = search.witness.is_some();
        v.witness = Some(match &search.witness {
            Some(w) => Witness::FusionIsomorphism {
                generator_images: w
                    .gamma
                    .generator_images()
                    .into_iter()
                    .map(|(a, b)| [a.to_string(), b.to_string()])
                    .collect(),
            },
            None => Witness::FusionObstruction {
                reason: search
                    .rejected_by
                    .unwrap_or("no isomorphism of Sylow subgroups transports the fusion system")
                    .to_string(),
                isomorphisms_checked: search.isomorphisms_checked,
            },
        });
        v.fusion_witness = search.witness;
        v.corollaries = Some(Corollaries {
            sylow_compatible_stable_equivalence: v.equivalent,
            unstable_equivalence: v.equivalent,
            note: "implied by the fusion verdict through the classification theorem, not computed",
        });
        Ok(v)
    }

    /// Unordered pairs that are stably equivalent but have non-isomorphic
    /// fusion systems, sorted by catalog position.
    pub fn distinguishing_search(&self, groups: &[Arc<FiniteGroup>], p: u64) -> Result<Vec<(usize, usize)>> {
        check_prime(p)?;
        for g in groups {
            self.prepare(g, p)?;
        }
        let pairs: Vec<(usize, usize)> = (0..groups.len())
            .flat_map(|i| (i + 1..groups.len()).map(move |j| (i, j)))
            .collect();
        let hits: Vec<Option<(usize, usize)>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&groups[i], &groups[j]);
                if !self.stable_equivalent_mp(a, b, p)?.equivalent {
                    return Ok(None);
                }
                let alt = self.alternative_classification(a, b, p)?;
                Ok((!alt.equivalent).then_some((i, j)))
            })
            .collect::<Result<_>>()?;
        Ok(hits.into_iter().flatten().collect())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn generator_strings(g: &FiniteGroup) -> Vec<String> {
    g.min_generators().iter().map(|&x| g.element(x).to_string()).collect()
}

impl Verdict {
    fn new(kind: VerdictKind, g: &FiniteGroup, g2: &FiniteGroup, p: u64) -> Self {
        Verdict {
            kind,
            groups: [g.name().to_string(), g2.name().to_string()],
            prime: p,
            equivalent: false,
            witness: None,
            candidate_q: Vec::new(),
            bound_note: String::new(),
            candidates: Vec::new(),
            corollaries: None,
            convention: ACTION_CONVENTION,
            fusion_witness: None,
        }
    }

    fn fill_from(&mut self, results: Vec<(CandidateResult, Arc<QType>)>) {
        self.candidate_q = results.iter().map(|(r, _)| r.q.clone()).collect();
        self.equivalent = results.iter().all(|(r, _)| r.isomorphic);
        self.witness = results
            .iter()
            .find(|(r, _)| !r.isomorphic)
            .map(|(r, t)| Witness::DistinguishingQ {
                q: r.q.clone(),
                order: r.order,
                generators: generator_strings(&t.group),
                dims: r.dims,
                method: r.method,
            });
        self.candidates = results.into_iter().map(|(r, _)| r).collect();
    }
}
