//! Homomorphisms between finite groups: exhaustive enumeration by
//! backtracking on generator images, automorphism groups and Out(Q).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomKind {
    General,
    Inclusion,
    Conjugation,
    Isomorphism,
}

/// A homomorphism given by its full table: `table[i]` is the target index of
/// source element `i`.
#[derive(Clone)]
pub struct Homomorphism {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    table: Vec<usize>,
    injective: bool,
    kind: HomKind,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source.id() == other.source.id() && self.target.id() == other.target.id() && self.table == other.table
    }
}

impl Eq for Homomorphism {}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} [", self.source.name(), self.target.name())?;
        for (k, (g, h)) in self.generator_images().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g} ↦ {h}")?;
        }
        write!(f, "]")
    }
}

impl Homomorphism {
    /// Checks multiplicativity on every pair before accepting the table.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, table: Vec<usize>, kind: HomKind) -> Result<Self> {
        if table.len() != source.order() || table.iter().any(|&t| t >= target.order()) {
            return Err(Error::NotAHomomorphism("table has the wrong shape".into()));
        }
        let h = Self::from_valid_table(source, target, table, kind);
        if !h.is_multiplicative() {
            return Err(Error::NotAHomomorphism(format!("{h:?}")));
        }
        Ok(h)
    }

    /// For tables produced by the enumeration kernels, which are
    /// multiplicative by construction.
    pub(crate) fn from_valid_table(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        table: Vec<usize>,
        kind: HomKind,
    ) -> Self {
        let injective = table.iter().filter(|&&t| t == 0).count() == 1;
        Homomorphism {
            source,
            target,
            table,
            injective,
            kind,
        }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Self::from_valid_table(g.clone(), g.clone(), (0..g.order()).collect(), HomKind::Isomorphism)
    }

    /// `x ↦ g x g⁻¹` on `g`'s own group.
    pub fn conjugation(g: &Arc<FiniteGroup>, by: usize) -> Self {
        let table = (0..g.order()).map(|x| g.conj(by, x)).collect();
        Self::from_valid_table(g.clone(), g.clone(), table, HomKind::Conjugation)
    }

    /// The inclusion of a standalone subgroup copy into its ambient group.
    pub fn inclusion(sub: &Arc<FiniteGroup>, ambient: &Arc<FiniteGroup>, h: &Subgroup) -> Result<Self> {
        if h.ambient() != ambient.id() || h.order() != sub.order() {
            return Err(Error::AmbientMismatch);
        }
        Ok(Self::from_valid_table(
            sub.clone(),
            ambient.clone(),
            h.members().to_vec(),
            HomKind::Inclusion,
        ))
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn into_table(self) -> Vec<usize> {
        self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&t| t == 0)
    }

    pub fn kind(&self) -> HomKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: HomKind) -> Self {
        self.kind = kind;
        self
    }

    /// Exhaustive check of `f(xy) = f(x) f(y)`.
    pub fn is_multiplicative(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        self.table[0] == 0
            && (0..s.order())
                .all(|x| (0..s.order()).all(|y| self.table[s.mul(x, y)] == t.mul(self.table[x], self.table[y])))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.target.id() != self.source.id() {
            return Err(Error::AmbientMismatch);
        }
        let table = first.table.iter().map(|&x| self.table[x]).collect();
        Ok(Self::from_valid_table(
            first.source.clone(),
            self.target.clone(),
            table,
            HomKind::General,
        ))
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.injective || self.source.order() != self.target.order() {
            return None;
        }
        let mut table = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(Self::from_valid_table(
            self.target.clone(),
            self.source.clone(),
            table,
            HomKind::Isomorphism,
        ))
    }

    /// The image as a subgroup of the target.
    pub fn image(&self) -> Subgroup {
        let imgs: BTreeSet<usize> = self.table.iter().copied().collect();
        let imgs: Vec<usize> = imgs.into_iter().collect();
        self.target.generate(&imgs)
    }

    /// Images of the source's short generating sequence, as permutations.
    pub fn generator_images(&self) -> Vec<(Permutation, Permutation)> {
        self.source
            .min_generators()
            .iter()
            .map(|&g| {
                (
                    self.source.element(g).clone(),
                    self.target.element(self.table[g]).clone(),
                )
            })
            .collect()
    }
}

/// Which homomorphisms an enumeration should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomFilter {
    All,
    Injective,
}

fn check_source_cap(source: &FiniteGroup) -> Result<()> {
    let limit = source.caps().max_hom_source;
    if source.order() > limit {
        return Err(Error::CapExceeded {
            what: "homomorphism source order",
            limit,
            actual: source.order(),
        });
    }
    Ok(())
}

const UNSET: usize = usize::MAX;

/// Visits the table of every homomorphism `source → target` in canonical
/// order (lexicographic on the images of `source.min_generators()`).
///
/// Backtracking assigns images to the generating sequence one at a time.
/// After each assignment the partial table is closed over the subgroup
/// generated so far by following `x ↦ x·gⱼ` edges; a conflicting edge means
/// no homomorphism extends the partial assignment. When all edges agree the
/// table is multiplicative, because every element is a positive word in the
/// generators.
pub fn for_each_hom_table(
    source: &FiniteGroup,
    target: &FiniteGroup,
    filter: HomFilter,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    check_source_cap(source)?;
    let gens = source.min_generators().to_vec();
    let injective = filter == HomFilter::Injective;
    if injective && source.order() > target.order() {
        return Ok(());
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = source.element_order(g);
            (0..target.order())
                .filter(|&t| {
                    let ot = target.element_order(t);
                    if injective {
                        ot == o
                    } else {
                        o % ot == 0
                    }
                })
                .collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    let mut search = Search {
        source,
        target,
        gens: &gens,
        candidates: &candidates,
        injective,
        images: &mut images,
        scratch: vec![UNSET; source.order()],
        queue: Vec::with_capacity(source.order()),
    };
    let _ = search.descend(0, &mut visit);
    Ok(())
}

struct Search<'a> {
    source: &'a FiniteGroup,
    target: &'a FiniteGroup,
    gens: &'a [usize],
    candidates: &'a [Vec<usize>],
    injective: bool,
    images: &'a mut Vec<usize>,
    scratch: Vec<usize>,
    queue: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if depth == self.gens.len() {
            // the parent call already closed the full table, except for the trivial group
            if depth == 0 {
                self.close(0);
            }
            return visit(&self.scratch);
        }
        for k in 0..self.candidates[depth].len() {
            self.images[depth] = self.candidates[depth][k];
            if self.close(depth + 1) {
                self.descend(depth + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Closes the partial table over `⟨g₁ … g_m⟩`; false on a conflict or,
    /// for injective searches, on a non-trivial kernel element.
    fn close(&mut self, m: usize) -> bool {
        let (s, t) = (self.source, self.target);
        self.scratch.fill(UNSET);
        self.scratch[0] = 0;
        self.queue.clear();
        self.queue.push(0);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            let fx = self.scratch[x];
            for j in 0..m {
                let y = s.mul(x, self.gens[j]);
                let fy = t.mul(fx, self.images[j]);
                match self.scratch[y] {
                    UNSET => {
                        if self.injective && fy == 0 {
                            return false;
                        }
                        self.scratch[y] = fy;
                        self.queue.push(y);
                    }
                    v if v != fy => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// All homomorphisms `source → target` (or all injective ones), complete and
/// duplicate-free, in canonical order.
pub fn homomorphisms(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    injective_only: bool,
) -> Result<Vec<Homomorphism>> {
    let filter = if injective_only {
        HomFilter::Injective
    } else {
        HomFilter::All
    };
    let mut out = Vec::new();
    for_each_hom_table(source, target, filter, |t| {
        out.push(Homomorphism::from_valid_table(
            source.clone(),
            target.clone(),
            t.to_vec(),
            HomKind::General,
        ));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Cheap isomorphism invariants: order and element-order multiset.
pub fn may_be_isomorphic(p: &FiniteGroup, q: &FiniteGroup) -> bool {
    p.order() == q.order() && p.order_profile() == q.order_profile()
}

/// Visits every isomorphism `p → q` lazily.
pub fn for_each_isomorphism(
    p: &Arc<FiniteGroup>,
    q: &Arc<FiniteGroup>,
    mut visit: impl FnMut(Homomorphism) -> ControlFlow<()>,
) -> Result<()> {
    if !may_be_isomorphic(p, q) {
        return Ok(());
    }
    for_each_hom_table(p, q, HomFilter::Injective, |t| {
        visit(Homomorphism::from_valid_table(
            p.clone(),
            q.clone(),
            t.to_vec(),
            HomKind::Isomorphism,
        ))
    })
}

pub fn isomorphisms_between(p: &Arc<FiniteGroup>, q: &Arc<FiniteGroup>) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    for_each_isomorphism(p, q, |h| {
        out.push(h);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn find_isomorphism(p: &Arc<FiniteGroup>, q: &Arc<FiniteGroup>) -> Result<Option<Homomorphism>> {
    let mut found = None;
    for_each_isomorphism(p, q, |h| {
        found = Some(h);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Aut(Q), Inn(Q), and Out(Q) as coset representatives.
#[derive(Clone, Debug)]
pub struct AutomorphismClasses {
    pub aut: Vec<Homomorphism>,
    pub inn: Vec<Homomorphism>,
    pub out: Arc<OutGroup>,
}

pub fn automorphism_classes(q: &Arc<FiniteGroup>) -> Result<AutomorphismClasses> {
    let aut = homomorphisms(q, q, true)?
        .into_iter()
        .map(|h| h.with_kind(HomKind::Isomorphism))
        .collect::<Vec<_>>();
    let inn_tables: BTreeSet<Vec<usize>> = (0..q.order())
        .map(|g| (0..q.order()).map(|x| q.conj(g, x)).collect())
        .collect();
    let inn: Vec<Homomorphism> = inn_tables
        .iter()
        .map(|t| Homomorphism::from_valid_table(q.clone(), q.clone(), t.clone(), HomKind::Conjugation))
        .collect();
    let out = OutGroup::from_parts(q.clone(), aut.iter().map(|h| h.table().to_vec()).collect(), &inn_tables);
    Ok(AutomorphismClasses {
        aut,
        inn,
        out: Arc::new(out),
    })
}

/// Out(Q) = Aut(Q)/Inn(Q). Element `i` is the coset of `reps[i]`, the least
/// automorphism table in its coset; element 0 is the identity coset.
pub struct OutGroup {
    q: Arc<FiniteGroup>,
    reps: Vec<Vec<usize>>,
    coset_of: HashMap<Vec<usize>, usize>,
    inner_order: usize,
    generators: Vec<usize>,
}

impl fmt::Debug for OutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Out({})<order {}>", self.q.name(), self.order())
    }
}

impl OutGroup {
    fn from_parts(q: Arc<FiniteGroup>, mut aut: Vec<Vec<usize>>, inn: &BTreeSet<Vec<usize>>) -> Self {
        aut.sort();
        let mut coset_of: HashMap<Vec<usize>, usize> = HashMap::with_capacity(aut.len());
        let mut reps = Vec::new();
        for a in &aut {
            if coset_of.contains_key(a) {
                continue;
            }
            // aut is sorted, so the first unassigned table is least in its coset
            let idx = reps.len();
            reps.push(a.clone());
            for i in inn {
                let prod: Vec<usize> = i.iter().map(|&x| a[x]).collect();
                coset_of.insert(prod, idx);
            }
        }
        let mut out = OutGroup {
            q,
            reps,
            coset_of,
            inner_order: inn.len(),
            generators: Vec::new(),
        };
        out.generators = out.greedy_generators();
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.order()];
        reached[0] = true;
        let mut count = 1;
        while count < self.order() {
            let g = (0..self.order()).find(|&i| !reached[i]).unwrap();
            gens.push(g);
            // re-close from scratch over the enlarged generator list
            reached.fill(false);
            reached[0] = true;
            let mut list = vec![0];
            let mut head = 0;
            while head < list.len() {
                let x = list[head];
                head += 1;
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !reached[y] {
                        reached[y] = true;
                        list.push(y);
                    }
                }
            }
            count = list.len();
        }
        gens
    }

    pub fn q(&self) -> &Arc<FiniteGroup> {
        &self.q
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn inner_order(&self) -> usize {
        self.inner_order
    }

    pub fn aut_order(&self) -> usize {
        self.reps.len() * self.inner_order
    }

    /// Coset representative tables, least first.
    pub fn representatives(&self) -> &[Vec<usize>] {
        &self.reps
    }

    pub fn representative(&self, i: usize) -> Homomorphism {
        Homomorphism::from_valid_table(
            self.q.clone(),
            self.q.clone(),
            self.reps[i].clone(),
            HomKind::Isomorphism,
        )
    }

    /// Generating sequence of Out(Q) as element indices.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Coset containing an automorphism table.
    pub fn coset_of(&self, table: &[usize]) -> Option<usize> {
        self.coset_of.get(table).copied()
    }

    /// All automorphism tables in coset `i`.
    pub fn coset_members(&self, i: usize) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self
            .coset_of
            .iter()
            .filter(|(_, &c)| c == i)
            .map(|(t, _)| t.clone())
            .collect();
        v.sort();
        v
    }

    /// Coset of `reps[a] ∘ reps[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (ra, rb) = (&self.reps[a], &self.reps[b]);
        let prod: Vec<usize> = rb.iter().map(|&x| ra[x]).collect();
        self.coset_of[&prod]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut inv = vec![0; self.reps[a].len()];
        for (x, &y) in self.reps[a].iter().enumerate() {
            inv[y] = x;
        }
        self.coset_of[&inv]
    }

    /// Breadth-first spanning tree of the Cayley graph: each entry
    /// `(element, parent, generator)` satisfies `element = parent · generator`;
    /// the root `(0, 0, usize::MAX)` comes first.
    pub fn spanning_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![(0, 0, usize::MAX)];
        let mut head = 0;
        while head < out.len() {
            let x = out[head].0;
            head += 1;
            for (k, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push((y, x, k));
                }
            }
        }
        out
    }

    /// Out(Q) as a permutation group via its left regular action. Returns the
    /// group and, for each of its element indices, the matching Out index.
    pub fn as_permutation_group(&self, caps: Caps) -> Result<(FiniteGroup, Vec<usize>)> {
        let n = self.order();
        let regular = |a: usize| -> Permutation {
            Permutation::from_images((0..n).map(|b| self.mul(a, b)).collect()).expect("regular action")
        };
        let gens: Vec<Permutation> = self.generators.iter().map(|&g| regular(g)).collect();
        let group = FiniteGroup::closure(format!("Out({})", self.q.name()), n, gens, caps)?;
        // the regular image of a sends the identity coset 0 to a
        let to_out = group.elements().iter().map(|p| p.apply(0)).collect();
        Ok((group, to_out))
    }
}
