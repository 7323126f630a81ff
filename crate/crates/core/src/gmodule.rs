//! Finite G-modules: coefficient spaces over F_p or Z/p^k with one invertible
//! action matrix per group generator, extended to all elements through the
//! BFS factorization words.

use crate::error::{Error, Result};
use crate::groups::PermGroup;
use crate::linalg::{FpMatrix, ZpkMatrix};
use std::sync::{Arc, OnceLock};

/// Coefficient ring Z/p^k (k = 1 is the field F_p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ring {
    pub p: u64,
    pub k: u32,
}

impl Ring {
    pub fn fp(p: u64) -> Self {
        Ring { p, k: 1 }
    }

    pub fn zpk(p: u64, k: u32) -> Self {
        Ring { p, k }
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn is_field(&self) -> bool {
        self.k == 1
    }
}

/// Exhaustive relation checking is done on groups up to this order; larger
/// groups get sampled spot checks.
const EXHAUSTIVE_RELATION_CAP: usize = 100;

#[derive(Debug, Clone)]
pub struct GModule {
    group: Arc<PermGroup>,
    ring: Ring,
    dim: usize,
    gen_actions: Vec<ZpkMatrix>,
    elem_actions: Arc<OnceLock<Vec<ZpkMatrix>>>,
}

impl GModule {
    pub fn new(group: Arc<PermGroup>, ring: Ring, gen_actions: Vec<ZpkMatrix>) -> Result<Self> {
        if gen_actions.len() != group.generators().len() {
            return Err(Error::Precondition(format!(
                "need {} action matrices, got {}",
                group.generators().len(),
                gen_actions.len()
            )));
        }
        let dim = gen_actions.first().map_or(0, |m| m.rows());
        for m in &gen_actions {
            if m.rows() != dim || m.cols() != dim || m.modulus() != ring.modulus() {
                return Err(Error::Precondition(
                    "action matrices must be square of equal size over the ring".into(),
                ));
            }
            m.inverse().map_err(|_| {
                Error::Precondition("action matrix is not invertible over the ring".into())
            })?;
        }
        let module = GModule {
            group,
            ring,
            dim,
            gen_actions,
            elem_actions: Arc::new(OnceLock::new()),
        };
        module.check_relations()?;
        Ok(module)
    }

    /// Module with `dim` coordinates and trivial action.
    pub fn trivial(group: Arc<PermGroup>, ring: Ring, dim: usize) -> Self {
        let id = ZpkMatrix::identity(ring.p, ring.k, dim);
        let gen_actions = vec![id; group.generators().len()];
        GModule {
            group,
            ring,
            dim,
            gen_actions,
            elem_actions: Arc::new(OnceLock::new()),
        }
    }

    /// Regular representation F_p[g] (permutation action on element indices).
    pub fn regular(group: Arc<PermGroup>, p: u64) -> Self {
        let n = group.order();
        let gen_actions = group
            .generators()
            .iter()
            .map(|s| {
                let si = group.index_of(s).expect("generator");
                let mut m = ZpkMatrix::zero(p, 1, n, n);
                for e in 0..n {
                    m.set(group.mul(si, e), e, 1);
                }
                m
            })
            .collect();
        GModule {
            group,
            ring: Ring::fp(p),
            dim: n,
            gen_actions,
            elem_actions: Arc::new(OnceLock::new()),
        }
    }

    fn check_relations(&self) -> Result<()> {
        let n = self.group.order();
        let acts = self.elem_actions();
        let check = |a: usize, b: usize| -> Result<()> {
            let prod = acts[a].mul(&acts[b])?;
            if prod != acts[self.group.mul(a, b)] {
                return Err(Error::Precondition(format!(
                    "action does not respect the relation at element pair ({a},{b})"
                )));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_RELATION_CAP {
            for a in 0..n {
                for b in 0..n {
                    check(a, b)?;
                }
            }
        } else {
            // generator-relation spot checks: s * e for all generators s
            for s in self.group.generators() {
                let si = self.group.index_of(s).expect("generator");
                for b in (0..n).step_by(7) {
                    check(si, b)?;
                }
            }
            // inverse consistency on a stride of elements
            for a in (0..n).step_by(11) {
                check(a, self.group.inv_index(a))?;
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen_actions(&self) -> &[ZpkMatrix] {
        &self.gen_actions
    }

    /// Action matrices for every element, computed once along the BFS tree.
    pub fn elem_actions(&self) -> &[ZpkMatrix] {
        self.elem_actions.get_or_init(|| {
            let n = self.group.order();
            let mut acts: Vec<ZpkMatrix> = Vec::with_capacity(n);
            acts.push(ZpkMatrix::identity(self.ring.p, self.ring.k, self.dim));
            for e in 1..n {
                let (parent, gi) = self.group.parent(e);
                let m = self.gen_actions[gi]
                    .mul(&acts[parent])
                    .expect("consistent dims");
                acts.push(m);
            }
            acts
        })
    }

    pub fn action(&self, elem: usize) -> &ZpkMatrix {
        &self.elem_actions()[elem]
    }

    pub fn act_vec(&self, elem: usize, v: &[u64]) -> Vec<u64> {
        self.action(elem).mul_vec(v).expect("consistent dims")
    }

    /// Kernel of the stacked (action(s) - 1): generators of the fixed
    /// subgroup, with additive orders (powers of p).
    pub fn invariants(&self) -> Vec<(Vec<u64>, u32)> {
        if self.dim == 0 {
            return Vec::new();
        }
        if self.gen_actions.is_empty() {
            // trivial group: everything is invariant
            let mut out = Vec::new();
            for i in 0..self.dim {
                let mut v = vec![0u64; self.dim];
                v[i] = 1;
                out.push((v, self.ring.k));
            }
            return out;
        }
        let id = ZpkMatrix::identity(self.ring.p, self.ring.k, self.dim);
        let blocks: Vec<ZpkMatrix> = self
            .gen_actions
            .iter()
            .map(|a| a.sub(&id).expect("same shape"))
            .collect();
        let rows = blocks.len() * self.dim;
        let mut entries = Vec::with_capacity(rows * self.dim);
        for b in &blocks {
            for r in 0..self.dim {
                entries.extend_from_slice(b.row(r));
            }
        }
        let stacked = ZpkMatrix::new(self.ring.p, self.ring.k, rows, self.dim, entries)
            .expect("consistent dims");
        stacked.kernel_generators()
    }

    /// Dimension of the fixed subspace (field coefficients only).
    pub fn invariants_dim(&self) -> usize {
        debug_assert!(self.ring.is_field());
        self.invariants().len()
    }

    /// |H^0| as an abelian group: product of the generator orders.
    pub fn invariants_order(&self) -> u128 {
        self.invariants()
            .iter()
            .map(|(_, e)| (self.ring.p as u128).pow(*e))
            .product()
    }

    /// Same space, action restricted along an inclusion h <= group.
    pub fn restrict(&self, h: Arc<PermGroup>) -> Result<GModule> {
        if !self.group.contains_group(&h) {
            return Err(Error::Containment(
                "restriction target is not a subgroup".into(),
            ));
        }
        let gen_actions = h
            .generators()
            .iter()
            .map(|s| {
                let idx = self.group.index_of(s).expect("subgroup element");
                self.action(idx).clone()
            })
            .collect();
        if h.generators().is_empty() {
            // trivial subgroup: keep the coordinate count
            return Ok(GModule::trivial(h, self.ring, self.dim));
        }
        GModule::new(h, self.ring, gen_actions)
    }

    /// Contragredient module: action by inverse transpose.
    pub fn dual(&self) -> GModule {
        let gen_actions = self
            .gen_actions
            .iter()
            .map(|a| transpose_zpk(&a.inverse().expect("invertible")))
            .collect();
        GModule {
            group: self.group.clone(),
            ring: self.ring,
            dim: self.dim,
            gen_actions,
            elem_actions: Arc::new(OnceLock::new()),
        }
    }

    /// Hom(self, other) with (g·f) = action_other(g) ∘ f ∘ action_self(g)^{-1}.
    /// Basis: matrix units E_{ab}, coordinate index a * dim_self + b.
    pub fn hom_module(&self, other: &GModule) -> Result<GModule> {
        if !Arc::ptr_eq(&self.group, &other.group) || self.ring != other.ring {
            return Err(Error::Precondition(
                "hom_module requires the same group and ring".into(),
            ));
        }
        let (dm, dn) = (self.dim, other.dim);
        let ring = self.ring;
        let md = ring.modulus();
        let gen_actions = self
            .gen_actions
            .iter()
            .zip(&other.gen_actions)
            .map(|(am, an)| {
                let am_inv = am.inverse().expect("invertible");
                let mut t = ZpkMatrix::zero(ring.p, ring.k, dm * dn, dm * dn);
                for a in 0..dn {
                    for b in 0..dm {
                        for i in 0..dn {
                            for j in 0..dm {
                                let v = (an.get(a, i) as u128 * am_inv.get(j, b) as u128
                                    % md as u128) as u64;
                                t.set(a * dm + b, i * dm + j, v);
                            }
                        }
                    }
                }
                t
            })
            .collect();
        GModule::new(self.group.clone(), ring, gen_actions)
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule> {
        if !Arc::ptr_eq(&self.group, &other.group) || self.ring != other.ring {
            return Err(Error::Precondition(
                "direct_sum requires the same group and ring".into(),
            ));
        }
        let dim = self.dim + other.dim;
        let gen_actions = self
            .gen_actions
            .iter()
            .zip(&other.gen_actions)
            .map(|(a, b)| {
                let mut m = ZpkMatrix::zero(self.ring.p, self.ring.k, dim, dim);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..other.dim {
                    for c in 0..other.dim {
                        m.set(self.dim + r, self.dim + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        GModule::new(self.group.clone(), self.ring, gen_actions)
    }

    /// Jordan-block freeness criterion over the group algebra of a cyclic
    /// p-group: with σ the generator of order p^n, the module is free iff
    /// rank((σ-1)^{p^n - 1}) = dim / p^n.
    pub fn free_over_cyclic(&self, cyclic: &PermGroup) -> Result<bool> {
        if !self.ring.is_field() {
            return Err(Error::Unsupported(
                "freeness test requires field coefficients".into(),
            ));
        }
        if !self.group.contains_group(cyclic) {
            return Err(Error::Containment("not a subgroup".into()));
        }
        let order = cyclic.order() as u64;
        let p = self.ring.p;
        let mut q = order;
        while q % p == 0 {
            q /= p;
        }
        if q != 1 {
            return Err(Error::Unsupported(format!(
                "subgroup order {order} is not a power of p = {p}"
            )));
        }
        // find a generator of the cyclic group
        let gen = cyclic
            .elements()
            .iter()
            .find(|e| e.order() == order)
            .ok_or_else(|| Error::Unsupported("subgroup is not cyclic".into()))?;
        if self.dim as u64 % order != 0 {
            return Ok(false);
        }
        let gi = self.group.index_of(gen).expect("subgroup element");
        let sigma = to_fp(self.action(gi));
        let id = FpMatrix::identity(p, self.dim);
        let nilpotent = sigma.sub(&id)?;
        let power = nilpotent.pow(order - 1)?;
        Ok(power.rank() as u64 == self.dim as u64 / order)
    }
}

/// An extension 0 -> K -> M' -> M -> 0 of modules over the same group.
#[derive(Debug)]
pub struct Extension {
    total: GModule,
    sub: GModule,
    quotient: GModule,
    /// dim_total x dim_sub inclusion matrix (columns = sub basis in total coords).
    inclusion: FpMatrix,
    /// dim_quot x dim_total projection matrix.
    projection: FpMatrix,
}

impl Extension {
    /// Build the extension determined by an invariant subspace of `total`
    /// (field coefficients). The quotient basis is the complement completed
    /// by standard basis vectors in index order.
    pub fn from_submodule(total: &GModule, sub_basis: &[Vec<u64>]) -> Result<Extension> {
        if !total.ring().is_field() {
            return Err(Error::Unsupported("extensions require a field".into()));
        }
        let p = total.ring().p;
        let dim = total.dim();
        let s = sub_basis.len();
        // T = [B | C] with C completing B to a basis
        let mut cols: Vec<Vec<u64>> = sub_basis.to_vec();
        let mut probe = FpMatrix::new(p, s, dim, sub_basis.iter().flatten().copied().collect())?;
        for i in 0..dim {
            if cols.len() == dim {
                break;
            }
            let mut e = vec![0u64; dim];
            e[i] = 1;
            let mut cand: Vec<Vec<u64>> = cols.clone();
            cand.push(e.clone());
            let m = FpMatrix::new(p, cand.len(), dim, cand.iter().flatten().copied().collect())?;
            if m.rank() == cand.len() {
                cols.push(e);
                probe = m;
            }
        }
        if cols.len() != dim {
            return Err(Error::Precondition("sub basis is not independent".into()));
        }
        let _ = probe;
        let mut t = FpMatrix::zero(p, dim, dim);
        for (c, v) in cols.iter().enumerate() {
            for (r, &x) in v.iter().enumerate() {
                t.set(r, c, x);
            }
        }
        let t_inv = t.inverse()?;
        // verify invariance and extract blocks
        let mut sub_actions = Vec::new();
        let mut quot_actions = Vec::new();
        for a in total.gen_actions() {
            let a_fp = to_fp(a);
            let conj = t_inv.mul(&a_fp)?.mul(&t)?;
            // lower-left block must vanish
            for r in s..dim {
                for c in 0..s {
                    if conj.get(r, c) != 0 {
                        return Err(Error::Precondition(
                            "subspace is not action-invariant".into(),
                        ));
                    }
                }
            }
            let mut ks = ZpkMatrix::zero(p, 1, s, s);
            for r in 0..s {
                for c in 0..s {
                    ks.set(r, c, conj.get(r, c));
                }
            }
            sub_actions.push(ks);
            let q = dim - s;
            let mut qs = ZpkMatrix::zero(p, 1, q, q);
            for r in 0..q {
                for c in 0..q {
                    qs.set(r, c, conj.get(s + r, s + c));
                }
            }
            quot_actions.push(qs);
        }
        let sub = GModule::new(total.group().clone(), total.ring(), sub_actions)?;
        let quotient = GModule::new(total.group().clone(), total.ring(), quot_actions)?;
        let mut inclusion = FpMatrix::zero(p, dim, s);
        for c in 0..s {
            for r in 0..dim {
                inclusion.set(r, c, cols[c][r]);
            }
        }
        let mut projection = FpMatrix::zero(p, dim - s, dim);
        for r in 0..dim - s {
            for c in 0..dim {
                projection.set(r, c, t_inv.get(s + r, c));
            }
        }
        Ok(Extension {
            total: total.clone(),
            sub,
            quotient,
            inclusion,
            projection,
        })
    }

    pub fn total(&self) -> &GModule {
        &self.total
    }
    pub fn sub(&self) -> &GModule {
        &self.sub
    }
    pub fn quotient(&self) -> &GModule {
        &self.quotient
    }
    pub fn inclusion(&self) -> &FpMatrix {
        &self.inclusion
    }
    pub fn projection(&self) -> &FpMatrix {
        &self.projection
    }

    /// Look for an equivariant linear section M -> M' of the projection.
    /// Returns the section matrix when the extension splits. A `None` result
    /// certifies H^1(G, Hom(M, K)) != 0.
    pub fn split_check(&self) -> Result<Option<FpMatrix>> {
        let p = self.total.ring().p;
        let dt = self.total.dim();
        let dq = self.quotient.dim();
        let nvars = dt * dq; // section entries S[r][c], index r * dq + c
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        // projection ∘ section = identity
        for r in 0..dq {
            for c in 0..dq {
                let mut row = vec![0u64; nvars];
                for t in 0..dt {
                    row[t * dq + c] = self.projection.get(r, t);
                }
                rows.push(row);
                rhs.push((r == c) as u64);
            }
        }
        // equivariance: A_total(g) S = S A_quot(g) for each generator
        for (at, aq) in self
            .total
            .gen_actions()
            .iter()
            .zip(self.quotient.gen_actions())
        {
            for r in 0..dt {
                for c in 0..dq {
                    let mut row = vec![0u64; nvars];
                    for t in 0..dt {
                        row[t * dq + c] = (row[t * dq + c] + at.get(r, t)) % p;
                    }
                    for t in 0..dq {
                        let cur = row[r * dq + t];
                        let sub = aq.get(t, c) % p;
                        row[r * dq + t] = (cur + p - sub) % p;
                    }
                    rows.push(row);
                    rhs.push(0);
                }
            }
        }
        let m = FpMatrix::new(p, rows.len(), nvars, rows.into_iter().flatten().collect())?;
        match m.solve(&rhs)? {
            None => Ok(None),
            Some(x) => {
                let mut s = FpMatrix::zero(p, dt, dq);
                for r in 0..dt {
                    for c in 0..dq {
                        s.set(r, c, x[r * dq + c]);
                    }
                }
                Ok(Some(s))
            }
        }
    }
}

pub(crate) fn to_fp(m: &ZpkMatrix) -> FpMatrix {
    debug_assert_eq!(m.k(), 1);
    let entries = (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect();
    FpMatrix::new(m.p(), m.rows(), m.cols(), entries).expect("consistent dims")
}

fn transpose_zpk(m: &ZpkMatrix) -> ZpkMatrix {
    let mut out = ZpkMatrix::zero(m.p(), m.k(), m.cols(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(c, r, m.get(r, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Perm, PermGroup};

    pub(crate) fn s3() -> Arc<PermGroup> {
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        Arc::new(PermGroup::closure(3, vec![a, b], 100).unwrap())
    }

    /// F_3 sign module of S_3: 3-cycle acts by +1, transposition by -1.
    pub(crate) fn sign_module(g: &Arc<PermGroup>) -> GModule {
        let gen_actions = g
            .generators()
            .iter()
            .map(|s| {
                let sign = if s.order() == 2 { 2 } else { 1 };
                ZpkMatrix::new(3, 1, 1, 1, vec![sign]).unwrap()
            })
            .collect();
        GModule::new(g.clone(), Ring::fp(3), gen_actions).unwrap()
    }

    /// Natural 2-dimensional F_2 module of S_3 = SL_2(F_2).
    pub(crate) fn natural_f2_module(g: &Arc<PermGroup>) -> GModule {
        // identify the 3-cycle (012) with [[0,1],[1,1]] and (01) with [[0,1],[1,0]]
        let gen_actions = g
            .generators()
            .iter()
            .map(|s| {
                let entries = if s.order() == 3 {
                    vec![0, 1, 1, 1]
                } else {
                    vec![0, 1, 1, 0]
                };
                ZpkMatrix::new(2, 1, 2, 2, entries).unwrap()
            })
            .collect();
        GModule::new(g.clone(), Ring::fp(2), gen_actions).unwrap()
    }

    #[test]
    fn trivial_action_invariants_are_full() {
        let g = s3();
        let m = GModule::trivial(g, Ring::fp(5), 3);
        assert_eq!(m.invariants().len(), 3);
    }

    #[test]
    fn sign_module_has_no_invariants() {
        let g = s3();
        assert_eq!(sign_module(&g).invariants().len(), 0);
    }

    #[test]
    fn natural_module_has_no_invariants() {
        let g = s3();
        assert_eq!(natural_f2_module(&g).invariants().len(), 0);
    }

    #[test]
    fn restrict_to_whole_group_is_identity() {
        let g = s3();
        let m = sign_module(&g);
        let r = m.restrict(g.clone()).unwrap();
        assert_eq!(r.gen_actions(), m.gen_actions());
    }

    #[test]
    fn sign_restricted_to_a3_is_trivial() {
        let g = s3();
        let m = sign_module(&g);
        let a3 = Arc::new(
            PermGroup::closure(3, vec![Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()], 10).unwrap(),
        );
        let r = m.restrict(a3).unwrap();
        assert!(r.gen_actions().iter().all(|a| a.get(0, 0) == 1));
    }

    #[test]
    fn sign_restricted_to_transposition_is_negation() {
        let g = s3();
        let m = sign_module(&g);
        let h = Arc::new(
            PermGroup::closure(3, vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()], 10).unwrap(),
        );
        let r = m.restrict(h).unwrap();
        assert_eq!(r.gen_actions()[0].get(0, 0), 2);
    }

    #[test]
    fn dual_of_dual_is_original() {
        let g = s3();
        let m = natural_f2_module(&g);
        assert_eq!(m.dual().dual().gen_actions(), m.gen_actions());
    }

    #[test]
    fn dual_of_trivial_is_trivial() {
        let g = s3();
        let m = GModule::trivial(g, Ring::fp(3), 2);
        assert_eq!(m.dual().gen_actions(), m.gen_actions());
    }

    #[test]
    fn hom_into_trivial_matches_dual() {
        let g = s3();
        let m = natural_f2_module(&g);
        let triv = GModule::trivial(g.clone(), Ring::fp(2), 1);
        let hom = m.hom_module(&triv).unwrap();
        assert_eq!(hom.dim(), m.dim());
        assert_eq!(hom.gen_actions(), m.dual().gen_actions());
    }

    #[test]
    fn direct_sum_invariants_add_up() {
        let g = s3();
        let m1 = sign_module(&g);
        let m2 = GModule::trivial(g.clone(), Ring::fp(3), 2);
        let s = m1.direct_sum(&m2).unwrap();
        assert_eq!(
            s.invariants().len(),
            m1.invariants().len() + m2.invariants().len()
        );
    }

    #[test]
    fn regular_module_of_z2_is_free() {
        let g = Arc::new(
            PermGroup::closure(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap(),
        );
        let m = GModule::regular(g.clone(), 2);
        assert!(m.free_over_cyclic(&g).unwrap());
    }

    #[test]
    fn trivial_module_over_z2_is_not_free() {
        let g = Arc::new(
            PermGroup::closure(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap(),
        );
        let m = GModule::trivial(g.clone(), Ring::fp(2), 1);
        assert!(!m.free_over_cyclic(&g).unwrap());
    }

    #[test]
    fn natural_module_free_over_sylow_two() {
        let g = s3();
        let m = natural_f2_module(&g);
        let syl = Arc::new(g.sylow_p(2).unwrap());
        assert!(m.free_over_cyclic(&syl).unwrap());
    }

    #[test]
    fn direct_sum_extension_splits() {
        let g = s3();
        let m1 = sign_module(&g);
        let m2 = GModule::trivial(g.clone(), Ring::fp(3), 1);
        let total = m1.direct_sum(&m2).unwrap();
        let ext = Extension::from_submodule(&total, &[vec![1, 0]]).unwrap();
        let s = ext.split_check().unwrap().expect("direct sum splits");
        // section composed with projection is the identity
        let pi_s = ext.projection().mul(&s).unwrap();
        assert_eq!(pi_s, FpMatrix::identity(3, 1));
    }

    #[test]
    fn split_check_trivial_extension_over_trivial_group() {
        let g = Arc::new(PermGroup::trivial(2));
        let total = GModule::trivial(g, Ring::fp(2), 2);
        let ext = Extension::from_submodule(&total, &[vec![1, 0]]).unwrap();
        assert!(ext.split_check().unwrap().is_some());
    }

    /// Brute-force all candidate sections for tiny extensions and compare
    /// with the linear-system answer.
    #[test]
    fn split_check_matches_exhaustive_search() {
        let g = s3();
        let m = natural_f2_module(&g);
        let triv = GModule::trivial(g.clone(), Ring::fp(2), 1);
        let total = m.direct_sum(&triv).unwrap();
        let ext = Extension::from_submodule(&total, &[vec![0, 0, 1]]).unwrap();
        let dt = ext.total().dim();
        let dq = ext.quotient().dim();
        let nvars = dt * dq;
        let mut found = false;
        'outer: for mask in 0..(1u32 << nvars) {
            let mut s = FpMatrix::zero(2, dt, dq);
            for r in 0..dt {
                for c in 0..dq {
                    s.set(r, c, ((mask >> (r * dq + c)) & 1) as u64);
                }
            }
            if ext.projection().mul(&s).unwrap() != FpMatrix::identity(2, dq) {
                continue;
            }
            for (at, aq) in ext
                .total()
                .gen_actions()
                .iter()
                .zip(ext.quotient().gen_actions())
            {
                let lhs = to_fp(at).mul(&s).unwrap();
                let rhs = s.mul(&to_fp(aq)).unwrap();
                if lhs != rhs {
                    continue 'outer;
                }
            }
            found = true;
            break;
        }
        assert_eq!(ext.split_check().unwrap().is_some(), found);
    }

    #[test]
    fn equivariance_is_exhaustively_consistent() {
        let g = s3();
        let m = natural_f2_module(&g);
        let acts = m.elem_actions();
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(acts[a].mul(&acts[b]).unwrap(), acts[g.mul(a, b)]);
            }
        }
    }

    #[test]
    fn negation_on_z9() {
        let g = Arc::new(
            PermGroup::closure(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap(),
        );
        let m = GModule::new(
            g,
            Ring::zpk(3, 2),
            vec![ZpkMatrix::new(3, 2, 1, 1, vec![8]).unwrap()],
        )
        .unwrap();
        assert_eq!(m.invariants().len(), 0);
    }
}
