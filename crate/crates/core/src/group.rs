//! Finite permutation groups with a fully enumerated element set.
//!
//! Elements are stored sorted lexicographically by image array, so element
//! index order is the canonical element order and index 0 is the identity.
//! Every other structure in the crate refers to elements by index.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

/// Groups up to this order carry a precomputed multiplication table.
const TABLE_LIMIT: usize = 1024;

/// Enumeration limits. Every group carries the caps it was built with and
/// passes them on to groups derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order `closure` will produce.
    pub max_order: usize,
    /// Largest ambient order for full subgroup enumeration.
    pub max_subgroup_ambient: usize,
    /// Largest source order for homomorphism enumeration.
    pub max_hom_source: usize,
    /// Largest explicit biset.
    pub max_biset: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: 5040,
            max_subgroup_ambient: 512,
            max_hom_source: 128,
            max_biset: 10_000,
        }
    }
}

/// Content hash of a group's element set. Two groups with the same degree
/// and the same elements share an id regardless of name or generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupId(u64);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

pub struct FiniteGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    gen_idx: Vec<usize>,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, usize>,
    mul: Option<Vec<u32>>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    caps: Caps,
    id: GroupId,
    min_gens: OnceLock<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<order {}>", self.name, self.order())
    }
}

impl FiniteGroup {
    /// The group generated by `generators`, with every element enumerated.
    pub fn closure(name: impl Into<String>, degree: usize, generators: Vec<Permutation>, caps: Caps) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for s in &generators {
                let y = x.compose(s);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    if seen.len() > caps.max_order {
                        return Err(Error::CapExceeded {
                            what: "group order",
                            limit: caps.max_order,
                            actual: seen.len(),
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::assemble(name.into(), degree, generators, elements, caps, None))
    }

    /// Builds the group structure from a sorted, closed element list. When
    /// `product` is given it is used to fill the multiplication table.
    fn assemble(
        name: String,
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
        caps: Caps,
        product: Option<&dyn Fn(usize, usize) -> usize>,
    ) -> Self {
        let n = elements.len();
        let lookup: HashMap<Permutation, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let c = match product {
                        Some(f) => f(a, b),
                        None => lookup[&elements[a].compose(&elements[b])],
                    };
                    t.push(c as u32);
                }
            }
            t
        });
        let inv = elements.iter().map(|p| lookup[&p.inverse()]).collect();
        let orders = elements.iter().map(Permutation::order).collect();
        let gen_idx = generators.iter().map(|g| lookup[g]).collect();
        let mut h = DefaultHasher::new();
        degree.hash(&mut h);
        elements.hash(&mut h);
        let id = GroupId(h.finish());
        FiniteGroup {
            name,
            degree,
            generators,
            gen_idx,
            elements,
            lookup,
            mul,
            inv,
            orders,
            caps,
            id,
            min_gens: OnceLock::new(),
        }
    }

    /// A standalone copy of a subgroup. Element `i` of the result is
    /// `h.members()[i]` of `self`, because both lists are in canonical order.
    pub fn subgroup_as_group(&self, h: &Subgroup, name: impl Into<String>) -> Result<Self> {
        if h.ambient() != self.id {
            return Err(Error::AmbientMismatch);
        }
        let members = h.members();
        let elements: Vec<Permutation> = members.iter().map(|&i| self.elements[i].clone()).collect();
        let gens = self.generating_set(members);
        let generators = gens.iter().map(|&i| self.elements[i].clone()).collect();
        let product = |a: usize, b: usize| -> usize {
            let c = self.mul(members[a], members[b]);
            h.position(c).expect("subgroup is closed")
        };
        Ok(Self::assemble(
            name.into(),
            self.degree,
            generators,
            elements,
            self.caps,
            Some(&product),
        ))
    }

    pub fn with_caps(&self, caps: Caps) -> Self {
        let mut g = Self::assemble(
            self.name.clone(),
            self.degree,
            self.generators.clone(),
            self.elements.clone(),
            caps,
            Some(&|a, b| self.mul(a, b)),
        );
        g.min_gens = self.min_gens.clone();
        g
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut g = self.with_caps(self.caps);
        g.name = name.into();
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_idx
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `elements[a] ∘ elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.lookup[&self.elements[a].compose(&self.elements[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_idx;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Members of the subgroup generated by `gens`, as a bitset and sorted list.
    pub(crate) fn close(&self, gens: &[usize]) -> (BitSet, Vec<usize>) {
        let mut bits = BitSet::new(self.order());
        bits.insert(0);
        let mut list = vec![0];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if bits.insert(y) {
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        (bits, list)
    }

    /// Greedy short generating set for the subgroup with the given members:
    /// each step adds the element enlarging the generated subgroup the most
    /// (least index on ties). For p-groups the result is minimal.
    pub(crate) fn generating_set(&self, members: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let (mut current, mut size) = (BitSet::from_indices(self.order(), &[0]), 1);
        while size < members.len() {
            let mut best: Option<(usize, usize, BitSet)> = None;
            for &x in members {
                if current.contains(x) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(x);
                let (bits, list) = self.close(&trial);
                if best.as_ref().is_none_or(|(_, s, _)| list.len() > *s) {
                    best = Some((x, list.len(), bits));
                }
            }
            let (x, s, bits) = best.expect("members generate a larger subgroup");
            gens.push(x);
            size = s;
            current = bits;
        }
        gens
    }

    /// Short generating sequence of the whole group (cached).
    pub fn min_generators(&self) -> &[usize] {
        self.min_gens.get_or_init(|| {
            let all: Vec<usize> = (0..self.order()).collect();
            self.generating_set(&all)
        })
    }
}
