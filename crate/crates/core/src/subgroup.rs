//! Subgroups of a [`FiniteGroup`]: enumeration, conjugacy, normalizers and
//! Sylow subgroups.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupId};
use crate::perm::Permutation;

/// A subgroup, stored as the sorted indices of its members in the ambient group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: GroupId,
    members: Vec<usize>,
    bits: BitSet,
}

impl Subgroup {
    pub(crate) fn from_parts(ambient: GroupId, members: Vec<usize>, bits: BitSet) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { ambient, members, bits }
    }

    pub fn ambient(&self) -> GroupId {
        self.ambient
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, element: usize) -> bool {
        self.bits.contains(element)
    }

    /// Position of an ambient element in the member list.
    pub fn position(&self, element: usize) -> Option<usize> {
        self.members.binary_search(&element).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.bits.is_subset(&other.bits)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub(crate) fn bits(&self) -> &BitSet {
        &self.bits
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.members.hash(state);
    }
}

/// Canonical subgroup order: by order, then by member list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
            .then_with(|| self.ambient.cmp(&other.ambient))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One orbit of subgroups under conjugation.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Least member of the class in canonical order.
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: u64) -> usize {
    let p = p as usize;
    let mut m = 1;
    let mut n = n;
    while n % p == 0 {
        n /= p;
        m *= p;
    }
    m
}

pub fn is_power_of(n: usize, p: u64) -> bool {
    n >= 1 && p_part(n, p) == n
}

impl FiniteGroup {
    pub fn whole(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.order()).collect();
        let bits = BitSet::from_indices(self.order(), &members);
        Subgroup::from_parts(self.id(), members, bits)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_parts(self.id(), vec![0], BitSet::from_indices(self.order(), &[0]))
    }

    /// The subgroup generated by the given element indices.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let (bits, list) = self.close(gens);
        Subgroup::from_parts(self.id(), list, bits)
    }

    /// The subgroup generated by the given permutations.
    pub fn generate_by(&self, gens: &[Permutation]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|p| {
                self.index_of(p)
                    .ok_or_else(|| Error::ElementNotInAmbient(p.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generate(&idx))
    }

    /// Validates a member list as a subgroup.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        if let Some(&bad) = members.iter().find(|&&m| m >= self.order()) {
            return Err(Error::ElementNotInAmbient(format!("index {bad}")));
        }
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        let h = self.generate(&m);
        if h.order() != m.len() {
            return Err(Error::NotASubgroup);
        }
        Ok(h)
    }

    /// Short generating sequence of a subgroup.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        self.generating_set(h.members())
    }

    /// `{g h g⁻¹ : h ∈ H}` for a permutation `g` of the ambient group.
    pub fn conjugate_subgroup(&self, g: &Permutation, h: &Subgroup) -> Result<Subgroup> {
        let gi = self
            .index_of(g)
            .ok_or_else(|| Error::ElementNotInAmbient(g.to_string()))?;
        if h.ambient() != self.id() {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.conjugate_subgroup_by(gi, h))
    }

    pub fn conjugate_subgroup_by(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members().iter().map(|&x| self.conj(g, x)).collect();
        members.sort_unstable();
        let bits = BitSet::from_indices(self.order(), &members);
        Subgroup::from_parts(self.id(), members, bits)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let members: Vec<usize> = (0..self.order())
            .filter(|&g| h.members().iter().all(|&x| h.contains(self.conj(g, x))))
            .collect();
        let bits = BitSet::from_indices(self.order(), &members);
        Subgroup::from_parts(self.id(), members, bits)
    }

    fn check_subgroup_cap(&self) -> Result<()> {
        let limit = self.caps().max_subgroup_ambient;
        if self.order() > limit {
            return Err(Error::CapExceeded {
                what: "subgroup-enumeration ambient order",
                limit,
                actual: self.order(),
            });
        }
        Ok(())
    }

    /// Every subgroup exactly once, in canonical order.
    ///
    /// Breadth-first: each known subgroup is extended by one cyclic subgroup of
    /// prime-power order at a time. Every subgroup is generated by such cyclic
    /// subgroups, so the search reaches all of them.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.check_subgroup_cap()?;
        let n = self.order();
        let mut cyclic: Vec<(usize, BitSet)> = Vec::new();
        let mut cyclic_seen: HashSet<BitSet> = HashSet::new();
        for x in 1..n {
            let o = self.element_order(x);
            if !is_prime_power(o) {
                continue;
            }
            let (bits, _) = self.close(&[x]);
            if cyclic_seen.insert(bits.clone()) {
                cyclic.push((x, bits));
            }
        }

        let trivial = self.trivial_subgroup();
        let mut found: Vec<(Subgroup, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
        let mut seen: HashSet<BitSet> = HashSet::from([trivial.bits().clone()]);
        let mut head = 0;
        while head < found.len() {
            let (h, gens) = found[head].clone();
            head += 1;
            for (x, cbits) in &cyclic {
                if cbits.is_subset(h.bits()) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*x);
                let (bits, list) = self.close(&g2);
                if seen.insert(bits.clone()) {
                    found.push((Subgroup::from_parts(self.id(), list, bits), g2));
                }
            }
        }
        let mut subs: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
        subs.sort();
        Ok(subs)
    }

    /// Orbits of all subgroups under conjugation, ordered by representative.
    pub fn subgroup_conjugacy_classes(&self) -> Result<Vec<SubgroupClass>> {
        let subs = self.all_subgroups()?;
        let index: HashMap<&Subgroup, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut assigned = vec![false; subs.len()];
        let mut classes = Vec::new();
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            assigned[i] = true;
            let mut orbit = vec![i];
            let mut head = 0;
            while head < orbit.len() {
                let cur = orbit[head];
                head += 1;
                for &g in self.generator_indices() {
                    let c = self.conjugate_subgroup_by(g, &subs[cur]);
                    let j = index[&c];
                    if !assigned[j] {
                        assigned[j] = true;
                        orbit.push(j);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(SubgroupClass {
                representative: subs[i].clone(),
                members: orbit.iter().map(|&j| subs[j].clone()).collect(),
            });
        }
        Ok(classes)
    }

    /// A Sylow `p`-subgroup, built deterministically by normalizer ascent.
    pub fn sylow_subgroup(&self, p: u64) -> Result<Subgroup> {
        self.sylow_ascent(p, |cands| cands[0])
    }

    /// A Sylow `p`-subgroup where each ascent step picks a random candidate.
    pub fn sylow_subgroup_random<R: Rng>(&self, p: u64, rng: &mut R) -> Result<Subgroup> {
        self.sylow_ascent(p, |cands| cands[rng.gen_range(0..cands.len())])
    }

    /// Start from the trivial subgroup and repeatedly adjoin a p-element of
    /// the normalizer lying outside the current subgroup, until the order
    /// equals the p-part of |G|. Such an element exists while the current
    /// p-subgroup is not Sylow, and adjoining it keeps a p-group because it
    /// normalizes the current subgroup.
    fn sylow_ascent(&self, p: u64, mut choose: impl FnMut(&[usize]) -> usize) -> Result<Subgroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let target = p_part(self.order(), p);
        let mut gens: Vec<usize> = Vec::new();
        let mut current = self.trivial_subgroup();
        while current.order() < target {
            let n = self.normalizer(&current);
            let cands: Vec<usize> = n
                .members()
                .iter()
                .copied()
                .filter(|&y| !current.contains(y) && is_power_of(self.element_order(y), p))
                .collect();
            assert!(
                !cands.is_empty(),
                "normalizer of a non-Sylow p-subgroup has a new p-element"
            );
            gens.push(choose(&cands));
            current = self.generate(&gens);
        }
        Ok(current)
    }

    /// Some `g` with `g H g⁻¹ = K`, if one exists.
    pub fn conjugator(&self, h: &Subgroup, k: &Subgroup) -> Option<usize> {
        if h.order() != k.order() {
            return None;
        }
        (0..self.order()).find(|&g| h.members().iter().all(|&x| k.contains(self.conj(g, x))))
    }
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    is_power_of(n, p as u64)
}
