//! Finite-level Hochschild–Serre data: the conjugation action of G/H on
//! H^q(H, M), the E_2 page dims, and explicit inflation-restriction
//! exactness in low degree.
//!
//! Everything here is field-coefficient only and fully materialized; the
//! intended instances are small (|G| <= a few dozen).

use crate::cohomology::{d_matrix, differential, Cochain, Settings};
use crate::error::{Error, Result};
use crate::gmodule::{to_fp, GModule, Ring};
use crate::groups::{PermGroup, Quotient};
use crate::linalg::{EchelonAccumulator, FpMatrix, ZpkMatrix};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// A chosen basis of H^q classes: representative cocycles (flattened
/// tables) plus a solver that writes any cocycle as (class coords, coboundary
/// coords).
struct ClassBasis {
    reps: Vec<Vec<u64>>,
    /// columns: class representatives, then a coboundary-space basis
    solver: FpMatrix,
}

impl ClassBasis {
    /// Deterministic: representatives are taken from kernel_basis output
    /// order, keeping those independent of the coboundary space.
    fn compute(m: &GModule, q: u32) -> Result<ClassBasis> {
        if !m.ring().is_field() {
            return Err(Error::Unsupported(
                "class bases require field coefficients".into(),
            ));
        }
        let p = m.ring().p;
        let space = m.group().order().pow(q) * m.dim();
        let cocycles: Vec<Vec<u64>> = if q == 0 {
            m.invariants().into_iter().map(|(v, _)| v).collect()
        } else {
            to_fp(&d_matrix(m, q)?).kernel_basis()
        };
        let mut acc = EchelonAccumulator::new_generic(p, space);
        let mut cob_basis: Vec<Vec<u64>> = Vec::new();
        if q > 0 {
            let dprev = d_matrix(m, q - 1)?;
            for j in 0..dprev.cols() {
                let col: Vec<u64> = (0..dprev.rows()).map(|i| dprev.get(i, j)).collect();
                acc.absorb_row(&col)?;
            }
            cob_basis = acc.basis_rows();
        }
        let mut reps = Vec::new();
        for z in cocycles {
            if acc.absorb_row(&z)? {
                reps.push(z);
            }
        }
        let ncols = reps.len() + cob_basis.len();
        let mut entries = vec![0u64; space * ncols];
        for (j, col) in reps.iter().chain(cob_basis.iter()).enumerate() {
            for (i, &x) in col.iter().enumerate() {
                entries[i * ncols + j] = x;
            }
        }
        let solver = FpMatrix::new(p, space, ncols, entries)?;
        Ok(ClassBasis { reps, solver })
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class coordinates of a cocycle (coboundary part discarded).
    fn project(&self, z: &[u64]) -> Result<Vec<u64>> {
        let coords = self
            .solver
            .solve(z)?
            .ok_or_else(|| Error::Precondition("vector is not a cocycle class".into()))?;
        Ok(coords[..self.reps.len()].to_vec())
    }
}

/// H^q(H, M) as a G/H-module: coset representatives act by
/// (s·f)(h_1,..,h_q) = s · f(s⁻¹h_1s, .., s⁻¹h_qs) on classes.
pub fn conjugation_module(
    g: &Arc<PermGroup>,
    h: &Arc<PermGroup>,
    m: &GModule,
    q: u32,
) -> Result<(GModule, Quotient)> {
    let quotient = Quotient::new(g, h)?;
    let restricted = m.restrict(h.clone())?;
    let basis = ClassBasis::compute(&restricted, q)?;
    let h_to_g: Vec<usize> = (0..h.order())
        .map(|i| g.index_of(h.element(i)).expect("subgroup element"))
        .collect();
    let g_to_h: HashMap<usize, usize> = h_to_g.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let ring = m.ring();
    let qgroup = quotient.group().clone();
    let action_of = |s_in_g: usize| -> Result<ZpkMatrix> {
        let s_inv = g.inv_index(s_in_g);
        let n = basis.dim();
        let mut entries = vec![0u64; n * n];
        for (j, rep) in basis.reps.iter().enumerate() {
            let z = conjugate_cocycle(m, &restricted, rep, s_in_g, s_inv, &h_to_g, &g_to_h, q)?;
            let coords = basis.project(&z)?;
            for (i, &c) in coords.iter().enumerate() {
                entries[i * n + j] = c;
            }
        }
        ZpkMatrix::new(ring.p, ring.k, n, n, entries)
    };
    // well-definedness: elements of h act trivially on classes
    for hp in h.generators() {
        let hi = g.index_of(hp).expect("subgroup generator");
        let a = action_of(hi)?;
        let n = basis.dim();
        if a != ZpkMatrix::identity(ring.p, ring.k, n) {
            return Err(Error::Construction(
                "conjugation action is not well defined on classes".into(),
            ));
        }
    }
    let gen_actions: Vec<ZpkMatrix> = qgroup
        .generators()
        .iter()
        .map(|qp| {
            let qi = qgroup.index_of(qp).expect("quotient generator");
            action_of(quotient.rep(qi))
        })
        .collect::<Result<_>>()?;
    let module = GModule::new(qgroup, Ring::fp(ring.p), gen_actions)?;
    Ok((module, quotient))
}

#[allow(clippy::too_many_arguments)]
fn conjugate_cocycle(
    m: &GModule,
    restricted: &GModule,
    rep: &[u64],
    s: usize,
    s_inv: usize,
    h_to_g: &[usize],
    g_to_h: &HashMap<usize, usize>,
    q: u32,
) -> Result<Vec<u64>> {
    let g = m.group();
    let h = restricted.group();
    let dim = m.dim();
    let q = q as usize;
    let count = h.order().pow(q as u32);
    let mut out = vec![0u64; count * dim];
    for t in 0..count {
        let tuple = crate::cohomology::index_tuple(h, t, q);
        let mut src = 0usize;
        for &hi in &tuple {
            let conj = g.mul(g.mul(s_inv, h_to_g[hi]), s);
            let back = *g_to_h
                .get(&conj)
                .ok_or_else(|| Error::Normality("conjugate left the subgroup".into()))?;
            src = src * h.order() + back;
        }
        let val = m.act_vec(s, &rep[src * dim..(src + 1) * dim]);
        out[t * dim..(t + 1) * dim].copy_from_slice(&val);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct E2Page {
    /// dims[p][q] = dim E_2^{p,q}
    pub dims: Vec<Vec<usize>>,
}

pub fn e2_page(
    g: &Arc<PermGroup>,
    h: &Arc<PermGroup>,
    m: &GModule,
    p_max: u32,
    q_max: u32,
    settings: &Settings,
) -> Result<E2Page> {
    let mut dims = vec![vec![0usize; q_max as usize + 1]; p_max as usize + 1];
    for q in 0..=q_max {
        let (nq, _) = conjugation_module(g, h, m, q)?;
        let report = crate::cohomology::cohomology_dims(&nq, p_max, settings)?;
        for p in 0..=p_max {
            dims[p as usize][q as usize] = report.degrees[p as usize].dim();
        }
    }
    Ok(E2Page { dims })
}

/// Exactness of 0 -> H¹(G/H, M^H) -> H¹(G, M) -> H¹(H, M) via explicit
/// cocycle maps: inflation pulls back along the projection, restriction
/// restricts the table.
pub fn inf_res_check(g: &Arc<PermGroup>, h: &Arc<PermGroup>, m: &GModule) -> Result<bool> {
    if !m.ring().is_field() {
        return Err(Error::Unsupported(
            "inflation-restriction requires field coefficients".into(),
        ));
    }
    let p = m.ring().p;
    let dim = m.dim();
    let (invmod, quotient) = conjugation_module(g, h, m, 0)?;
    let restricted = m.restrict(h.clone())?;
    // embedding of M^H coordinates into M coordinates
    let inv_basis: Vec<Vec<u64>> = restricted
        .invariants()
        .into_iter()
        .map(|(v, _)| v)
        .collect();
    debug_assert_eq!(inv_basis.len(), invmod.dim());
    let quot_classes = ClassBasis::compute(&invmod, 1)?;
    // inflated cocycles over g, flattened
    let qgroup = quotient.group();
    let mut inflated: Vec<Vec<u64>> = Vec::new();
    for rep in &quot_classes.reps {
        let mut table = vec![0u64; g.order() * dim];
        for x in 0..g.order() {
            let qx = quotient.project(x);
            let val = &rep[qx * invmod.dim()..(qx + 1) * invmod.dim()];
            for (c, &coef) in val.iter().enumerate() {
                for r in 0..dim {
                    let cur = table[x * dim + r];
                    table[x * dim + r] = (cur + coef * inv_basis[c][r]) % p;
                }
            }
        }
        let chk = Cochain::from_table(m, 1, table.chunks(dim).map(|c| c.to_vec()).collect())?;
        if !differential(&chk).is_zero() {
            return Err(Error::Construction(
                "inflation broke the cocycle rule".into(),
            ));
        }
        inflated.push(table);
    }
    let _ = qgroup;
    // coboundary space of g
    let d0 = d_matrix(m, 0)?;
    let mut b1g = EchelonAccumulator::new_generic(p, g.order() * dim);
    for j in 0..d0.cols() {
        let col: Vec<u64> = (0..d0.rows()).map(|i| d0.get(i, j)).collect();
        b1g.absorb_row(&col)?;
    }
    let b1g_dim = b1g.rank();
    // injectivity of inflation on classes
    let mut inj = b1g.clone();
    let mut injective = true;
    for z in &inflated {
        if !inj.absorb_row(z)? {
            injective = false;
        }
    }
    // coboundary space of h
    let d0h = d_matrix(&restricted, 0)?;
    let mut b1h = EchelonAccumulator::new_generic(p, h.order() * dim);
    for j in 0..d0h.cols() {
        let col: Vec<u64> = (0..d0h.rows()).map(|i| d0h.get(i, j)).collect();
        b1h.absorb_row(&col)?;
    }
    let h_to_g: Vec<usize> = (0..h.order())
        .map(|i| g.index_of(h.element(i)).expect("subgroup element"))
        .collect();
    let restrict_flat = |z: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; h.order() * dim];
        for (hi, &gi) in h_to_g.iter().enumerate() {
            out[hi * dim..(hi + 1) * dim].copy_from_slice(&z[gi * dim..(gi + 1) * dim]);
        }
        out
    };
    // res ∘ inf kills classes
    for z in &inflated {
        let r = b1h.reduce(&restrict_flat(z));
        if r.iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    // dim ker(res: H¹(g) -> H¹(h)) via Z¹(g)
    let z1g = to_fp(&d_matrix(m, 1)?).kernel_basis();
    let mut img = EchelonAccumulator::new_generic(p, h.order() * dim);
    let mut img_rank = 0usize;
    for z in &z1g {
        if img.absorb_row(&b1h.reduce(&restrict_flat(z)))? {
            img_rank += 1;
        }
    }
    let ker_res_dim = (z1g.len() - img_rank) - b1g_dim;
    Ok(injective && ker_res_dim == quot_classes.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_dims;
    use crate::gmodule::{GModule, Ring};
    use crate::groups::Perm;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn s3() -> Arc<PermGroup> {
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        Arc::new(PermGroup::closure(3, vec![a, b], 100).unwrap())
    }

    fn a3() -> Arc<PermGroup> {
        Arc::new(
            PermGroup::closure(3, vec![Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()], 100).unwrap(),
        )
    }

    fn sign_module(g: &Arc<PermGroup>) -> GModule {
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

    /// the natural permutation module of a permutation group
    fn perm_module(g: &Arc<PermGroup>, p: u64) -> GModule {
        let n = g.degree();
        let gen_actions = g
            .generators()
            .iter()
            .map(|s| {
                let mut mat = ZpkMatrix::zero(p, 1, n, n);
                for j in 0..n {
                    mat.set(s.apply(j), j, 1);
                }
                mat
            })
            .collect();
        GModule::new(g.clone(), Ring::fp(p), gen_actions).unwrap()
    }

    #[test]
    fn q0_conjugation_module_is_the_invariants() {
        let g = s3();
        let m = perm_module(&g, 2);
        let (n, quotient) = conjugation_module(&g, &a3(), &m, 0).unwrap();
        // A3-invariants of the permutation module are spanned by the all-ones
        // vector, fixed by S3/A3
        assert_eq!(n.dim(), 1);
        assert_eq!(quotient.group().order(), 2);
        assert_eq!(n.invariants_dim(), 1);
    }

    #[test]
    fn trivial_subgroup_recovers_the_module() {
        let g = s3();
        let m = sign_module(&g);
        let triv = Arc::new(PermGroup::trivial(3));
        let (n, _) = conjugation_module(&g, &triv, &m, 0).unwrap();
        assert_eq!(n.dim(), m.dim());
        let report = cohomology_dims(&n, 1, &Settings::default()).unwrap();
        let orig = cohomology_dims(&m, 1, &Settings::default()).unwrap();
        assert_eq!(report.degrees, orig.degrees);
    }

    #[test]
    fn h1_a3_sign_as_quotient_module() {
        let g = s3();
        let m = sign_module(&g);
        let (n, _) = conjugation_module(&g, &a3(), &m, 1).unwrap();
        assert_eq!(n.dim(), 1);
        // the C2 action fixes the class: invariants are everything
        assert_eq!(n.invariants_dim(), 1);
    }

    #[test]
    fn e2_page_of_s3_sign() {
        let g = s3();
        let m = sign_module(&g);
        let page = e2_page(&g, &a3(), &m, 2, 1, &Settings::default()).unwrap();
        // M^{A3} = 0 so the q = 0 row vanishes
        for p in 0..=2 {
            assert_eq!(page.dims[p][0], 0);
        }
        assert_eq!(page.dims[0][1], 1);
    }

    #[test]
    fn e2_page_h_equals_g_concentrates_in_p0() {
        let g = s3();
        let m = sign_module(&g);
        let page = e2_page(&g, &g, &m, 2, 1, &Settings::default()).unwrap();
        for p in 1..=2usize {
            for q in 0..=1usize {
                assert_eq!(page.dims[p][q], 0);
            }
        }
        // E2^{0,q} = H^q(G, M)
        assert_eq!(page.dims[0][0], 0);
        assert_eq!(page.dims[0][1], 1);
    }

    #[test]
    fn e2_page_trivial_h_concentrates_in_q0() {
        let g = s3();
        let m = sign_module(&g);
        let triv = Arc::new(PermGroup::trivial(3));
        let page = e2_page(&g, &triv, &m, 1, 2, &Settings::default()).unwrap();
        for p in 0..=1usize {
            for q in 1..=2usize {
                assert_eq!(page.dims[p][q], 0);
            }
        }
        assert_eq!(page.dims[1][0], 1);
    }

    #[test]
    fn e2_total_dim_dominates_h1() {
        let g = s3();
        for m in [sign_module(&g), perm_module(&g, 2), perm_module(&g, 3)] {
            let h1 = cohomology_dims(&m, 1, &Settings::default())
                .unwrap()
                .degrees[1]
                .dim();
            let page = e2_page(&g, &a3(), &m, 1, 1, &Settings::default()).unwrap();
            assert!(page.dims[1][0] + page.dims[0][1] >= h1);
        }
    }

    #[test]
    fn conjugation_rejects_non_normal_subgroups() {
        let g = s3();
        let m = sign_module(&g);
        let h = Arc::new(
            PermGroup::closure(3, vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()], 10).unwrap(),
        );
        assert!(matches!(
            conjugation_module(&g, &h, &m, 0),
            Err(Error::Normality(_))
        ));
    }

    #[test]
    fn inf_res_exact_for_s3_a3_sign() {
        let g = s3();
        let m = sign_module(&g);
        assert!(inf_res_check(&g, &a3(), &m).unwrap());
    }

    #[test]
    fn inf_res_exact_for_h_equals_g() {
        let g = s3();
        let m = sign_module(&g);
        assert!(inf_res_check(&g, &g, &m).unwrap());
    }

    #[test]
    fn inf_res_property_sweep() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        // (g, normal subgroup) pool with assorted modules
        let d4 = Arc::new(
            PermGroup::closure(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
                    Perm::from_cycles(4, &[&[1, 3]]).unwrap(),
                ],
                100,
            )
            .unwrap(),
        );
        let c4 = Arc::new(
            PermGroup::closure(
                4,
                vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()],
                100,
            )
            .unwrap(),
        );
        let v4 = Arc::new(
            PermGroup::closure(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
                    Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                ],
                100,
            )
            .unwrap(),
        );
        let g6 = s3();
        let mut cases: Vec<(Arc<PermGroup>, Arc<PermGroup>, GModule)> = Vec::new();
        for p in [2u64, 3] {
            cases.push((g6.clone(), a3(), perm_module(&g6, p)));
            cases.push((g6.clone(), g6.clone(), perm_module(&g6, p)));
            cases.push((d4.clone(), c4.clone(), perm_module(&d4, p)));
            cases.push((d4.clone(), v4.clone(), perm_module(&d4, p)));
            cases.push((d4.clone(), d4.clone(), perm_module(&d4, p)));
        }
        cases.push((g6.clone(), a3(), sign_module(&g6)));
        cases.push((g6.clone(), g6.clone(), sign_module(&g6)));
        let m2 = {
            let base = perm_module(&d4, 2);
            base.direct_sum(&base).unwrap()
        };
        cases.push((d4.clone(), c4.clone(), m2));
        cases.shuffle(&mut rng);
        assert!(cases.len() >= 13);
        for (i, (g, h, m)) in cases.iter().enumerate() {
            assert!(inf_res_check(g, h, m).unwrap(), "case {i}");
        }
    }
}
