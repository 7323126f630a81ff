//! Finite groups given by permutation generators.
//!
//! Elements are fully enumerated and indexed; all downstream tables (module
//! actions, cochains) key on element indices so that multiplication is O(1)
//! through a cached table. Enumeration is BFS by word length with
//! lexicographic tie-breaking, so indices are reproducible.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// A permutation of [0, n), acting on the left: (στ)(x) = σ(τ(x)).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!(
                    "images {images:?} are not a bijection of [0,{n})"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Parity: true when the permutation is a product of an even number of
    /// transpositions.
    pub fn is_even(&self) -> bool {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// Build a permutation from disjoint cycles over [0, n).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                images[cyc[w]] = cyc[(w + 1) % cyc.len()];
            }
        }
        Perm::new(images)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Largest multiplication table we cache eagerly (entries = order²).
const TABLE_ORDER_CAP: usize = 1500;

/// A finite permutation group with a full indexed element list.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// parent[i] = (parent element index, generator index); identity has
    /// parent (0, usize::MAX). elements[i] = generators[gi] ∘ elements[parent].
    parent: Vec<(usize, usize)>,
    table: OnceLock<Vec<u32>>,
    inv: OnceLock<Vec<u32>>,
}

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

impl PermGroup {
    /// BFS closure of the generators; deterministic element ordering.
    pub fn closure(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Precondition(format!(
                    "generator degree {} != {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0usize);
        let mut parent = vec![(0usize, usize::MAX)];
        let mut frontier: Vec<usize> = vec![0];
        while !frontier.is_empty() {
            // collect the next word-length level, then sort for determinism
            let mut level: Vec<(Perm, usize, usize)> = Vec::new();
            for &ei in &frontier {
                for (gi, g) in generators.iter().enumerate() {
                    let prod = g.compose(&elements[ei]);
                    if !index.contains_key(&prod) && !level.iter().any(|(q, _, _)| *q == prod) {
                        level.push((prod, ei, gi));
                    }
                }
            }
            level.sort();
            frontier = Vec::new();
            for (q, ei, gi) in level {
                if index.contains_key(&q) {
                    continue;
                }
                let idx = elements.len();
                index.insert(q.clone(), idx);
                elements.push(q);
                parent.push((ei, gi));
                frontier.push(idx);
                if elements.len() > cap {
                    return Err(Error::Budget(format!(
                        "closure exceeded cap of {cap} elements"
                    )));
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            parent,
            table: OnceLock::new(),
            inv: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::closure(degree, vec![], 1).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// (parent index, generator index) from the BFS spanning tree.
    pub fn parent(&self, i: usize) -> (usize, usize) {
        self.parent[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if n <= TABLE_ORDER_CAP {
            let t = self.table.get_or_init(|| {
                let mut t = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let prod = self.elements[i].compose(&self.elements[j]);
                        t[i * n + j] = self.index[&prod] as u32;
                    }
                }
                t
            });
            t[a * n + b] as usize
        } else {
            self.index[&self.elements[a].compose(&self.elements[b])]
        }
    }

    pub fn inv_index(&self, a: usize) -> usize {
        let inv = self.inv.get_or_init(|| {
            self.elements
                .iter()
                .map(|e| self.index[&e.inverse()] as u32)
                .collect()
        });
        inv[a] as usize
    }

    /// Every element of `h` lies in `self`.
    pub fn contains_group(&self, h: &PermGroup) -> bool {
        h.degree == self.degree && h.elements.iter().all(|e| self.index.contains_key(e))
    }

    /// `h` must be a subgroup; true iff every self-conjugate of every
    /// h-element lies in h.
    pub fn is_normal_subgroup(&self, h: &PermGroup) -> Result<bool> {
        if !self.contains_group(h) {
            return Err(Error::Containment("h is not a subgroup of g".into()));
        }
        for g in &self.elements {
            let ginv = g.inverse();
            for s in &h.generators {
                let conj = g.compose(s).compose(&ginv);
                if h.index_of(&conj).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Normal closure of `h` in `self`.
    pub fn normal_closure(&self, h: &PermGroup) -> Result<PermGroup> {
        if !self.contains_group(h) {
            return Err(Error::Containment("h is not a subgroup of g".into()));
        }
        let mut gens: Vec<Perm> = Vec::new();
        for g in &self.elements {
            let ginv = g.inverse();
            for s in &h.generators {
                let conj = g.compose(s).compose(&ginv);
                if !gens.contains(&conj) {
                    gens.push(conj);
                }
            }
        }
        gens.sort();
        PermGroup::closure(self.degree, gens, self.order())
    }

    /// Iterated-normal-closure subnormal chain from h up to self, or None.
    ///
    /// The chain is [h = k_m, ..., k_0 = self] with each group normal in the
    /// next; length 0 (single entry) when h = self.
    pub fn subnormal_chain(&self, h: &PermGroup) -> Result<Option<Vec<PermGroup>>> {
        if !self.contains_group(h) {
            return Err(Error::Containment("h is not a subgroup of g".into()));
        }
        let mut chain: Vec<PermGroup> = Vec::new();
        let mut current = PermGroup::closure(self.degree, self.generators.clone(), self.order())?;
        loop {
            let next = current.normal_closure(h)?;
            let stable = next.order() == current.order();
            chain.push(current);
            if stable {
                // stabilized; subnormal iff we stabilized exactly at h
                let last = chain.last().unwrap();
                if last.order() == h.order() {
                    chain.reverse();
                    return Ok(Some(chain));
                }
                return Ok(None);
            }
            if next.order() == h.order() {
                chain.push(next);
                chain.reverse();
                return Ok(Some(chain));
            }
            current = next;
        }
    }

    /// Normalizer of the subgroup `p` in self (brute force).
    pub fn normalizer(&self, p: &PermGroup) -> Result<PermGroup> {
        if !self.contains_group(p) {
            return Err(Error::Containment("p is not a subgroup of g".into()));
        }
        let gens: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| {
                let ginv = g.inverse();
                p.generators
                    .iter()
                    .all(|s| p.index_of(&g.compose(s).compose(&ginv)).is_some())
            })
            .cloned()
            .collect();
        PermGroup::closure(self.degree, gens, self.order())
    }

    /// A Sylow p-subgroup, grown greedily inside successive normalizers.
    /// Deterministic: candidates are scanned in element-index order.
    pub fn sylow_p(&self, p: u64) -> Result<PermGroup> {
        let mut pa = 1u64;
        let mut n = self.order() as u64;
        while n % p == 0 {
            n /= p;
            pa *= p;
        }
        let mut syl = PermGroup::trivial(self.degree);
        while (syl.order() as u64) < pa {
            let norm = self.normalizer(&syl)?;
            let mut extended = false;
            for cand in norm.elements() {
                let ord = cand.order();
                if ord == 1 {
                    continue;
                }
                // p-part of the candidate
                let mut ppow = 1u64;
                let mut m = ord;
                while m % p == 0 {
                    m /= p;
                    ppow *= p;
                }
                if ppow == 1 {
                    continue;
                }
                let mut y = Perm::identity(self.degree);
                for _ in 0..m {
                    y = y.compose(cand);
                }
                if syl.index_of(&y).is_some() {
                    continue;
                }
                let mut gens = syl.generators().to_vec();
                gens.push(y);
                let bigger = PermGroup::closure(self.degree, gens, pa as usize)?;
                syl = bigger;
                extended = true;
                break;
            }
            if !extended {
                // p does not divide the order at all
                break;
            }
        }
        Ok(syl)
    }
}

/// A quotient g/n with coset bookkeeping and the quotient realized as a
/// permutation group acting on cosets by left translation.
#[derive(Debug)]
pub struct Quotient {
    /// parent element index -> quotient element index (a homomorphism).
    projection: Vec<usize>,
    /// quotient element index -> a parent coset representative index.
    rep: Vec<usize>,
    group: Arc<PermGroup>,
}

impl Quotient {
    pub fn new(g: &PermGroup, n: &PermGroup) -> Result<Self> {
        if !g.is_normal_subgroup(n)? {
            return Err(Error::Normality("quotient by a non-normal subgroup".into()));
        }
        let order = g.order();
        // coset labels: smallest element index in each left coset
        let mut coset_label = vec![usize::MAX; order];
        let mut labels: Vec<usize> = Vec::new();
        for e in 0..order {
            if coset_label[e] != usize::MAX {
                continue;
            }
            labels.push(e);
            for h in n.elements() {
                let hi = g.index_of(h).expect("subgroup element");
                let m = g.mul(e, hi);
                coset_label[m] = e;
            }
        }
        let label_pos: HashMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let ncosets = labels.len();
        // permutation induced by each generator of g on cosets
        let induced = |ei: usize| -> Perm {
            let images = (0..ncosets)
                .map(|c| label_pos[&coset_label[g.mul(ei, labels[c])]])
                .collect();
            Perm::new(images).expect("translation is a bijection")
        };
        let gen_perms: Vec<Perm> = g
            .generators()
            .iter()
            .map(|gp| induced(g.index_of(gp).expect("generator")))
            .collect();
        let group = PermGroup::closure(ncosets.max(1), gen_perms, ncosets)?;
        if group.order() != ncosets {
            return Err(Error::Normality(
                "coset action order mismatch (internal)".into(),
            ));
        }
        let projection: Vec<usize> = (0..order)
            .map(|ei| {
                group
                    .index_of(&induced(ei))
                    .expect("induced permutation is in the quotient group")
            })
            .collect();
        let mut rep = vec![usize::MAX; ncosets];
        for ei in (0..order).rev() {
            rep[projection[ei]] = ei.min(rep[projection[ei]]);
        }
        Ok(Quotient {
            projection,
            rep,
            group: Arc::new(group),
        })
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    /// Parent element index -> quotient element index.
    pub fn project(&self, parent_elem: usize) -> usize {
        self.projection[parent_elem]
    }

    /// Quotient element index -> coset representative in the parent.
    pub fn rep(&self, quot_elem: usize) -> usize {
        self.rep[quot_elem]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> PermGroup {
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        PermGroup::closure(3, vec![a, b], 100).unwrap()
    }

    fn a3() -> PermGroup {
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        PermGroup::closure(3, vec![a], 100).unwrap()
    }

    fn transposition_subgroup() -> PermGroup {
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        PermGroup::closure(3, vec![b], 100).unwrap()
    }

    #[test]
    fn closure_of_transposition_has_order_two() {
        let g = PermGroup::closure(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn s3_has_order_six() {
        assert_eq!(s3().order(), 6);
        assert!(s3().element(0).is_identity());
    }

    #[test]
    fn closure_cap_errors() {
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(PermGroup::closure(3, vec![a, b], 4).is_err());
    }

    #[test]
    fn a3_is_normal_in_s3() {
        assert!(s3().is_normal_subgroup(&a3()).unwrap());
    }

    #[test]
    fn transposition_not_normal_in_s3() {
        assert!(!s3().is_normal_subgroup(&transposition_subgroup()).unwrap());
    }

    #[test]
    fn group_is_normal_in_itself() {
        let g = s3();
        assert!(g.is_normal_subgroup(&s3()).unwrap());
    }

    #[test]
    fn transposition_not_subnormal_in_s3() {
        assert!(s3()
            .subnormal_chain(&transposition_subgroup())
            .unwrap()
            .is_none());
    }

    #[test]
    fn whole_group_chain_has_length_zero() {
        let chain = s3().subnormal_chain(&s3()).unwrap().unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn a3_subnormal_in_s3() {
        let chain = s3().subnormal_chain(&a3()).unwrap().unwrap();
        assert_eq!(chain.len(), 2);
    }

    fn d8() -> PermGroup {
        let r = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let s = Perm::from_cycles(4, &[&[1, 3]]).unwrap();
        PermGroup::closure(4, vec![r, s], 100).unwrap()
    }

    #[test]
    fn all_subgroups_of_a_2_group_are_subnormal() {
        // Remark-style property: in the dihedral 2-group of order 8 every
        // cyclic subgroup is subnormal.
        let g = d8();
        assert_eq!(g.order(), 8);
        for e in g.elements() {
            let h = PermGroup::closure(4, vec![e.clone()], 100).unwrap();
            assert!(
                g.subnormal_chain(&h).unwrap().is_some(),
                "subgroup generated by {e:?}"
            );
        }
    }

    #[test]
    fn sylow_subgroups_of_s3() {
        let g = s3();
        assert_eq!(g.sylow_p(2).unwrap().order(), 2);
        let syl3 = g.sylow_p(3).unwrap();
        assert_eq!(syl3.order(), 3);
        // the unique subgroup of order 3 is A3
        assert!(a3().contains_group(&syl3));
    }

    #[test]
    fn sylow_of_cyclic_four_is_whole_group() {
        let g = PermGroup::closure(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()], 10)
            .unwrap();
        assert_eq!(g.sylow_p(2).unwrap().order(), 4);
    }

    #[test]
    fn sylow_when_p_does_not_divide() {
        assert_eq!(s3().sylow_p(5).unwrap().order(), 1);
    }

    #[test]
    fn quotient_s3_by_a3() {
        let g = s3();
        let q = Quotient::new(&g, &a3()).unwrap();
        assert_eq!(q.group().order(), 2);
        // projection is a homomorphism
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(
                    q.project(g.mul(a, b)),
                    q.group().mul(q.project(a), q.project(b))
                );
            }
        }
    }

    #[test]
    fn quotient_by_self_and_by_trivial() {
        let g = s3();
        let q = Quotient::new(&g, &s3()).unwrap();
        assert_eq!(q.group().order(), 1);
        let t = PermGroup::trivial(3);
        let q2 = Quotient::new(&g, &t).unwrap();
        assert_eq!(q2.group().order(), 6);
    }

    #[test]
    fn lagrange_on_sylows() {
        for &p in &[2u64, 3, 5] {
            let g = s3();
            assert_eq!(g.order() % g.sylow_p(p).unwrap().order(), 0);
        }
    }
}
