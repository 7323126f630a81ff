//! Named constructors for the standard example scenarios, each returning
//! ready-to-verify objects. Builders perform structural certification during
//! construction (a wrong model fails loudly with `Error::Construction`), and
//! every `verify` method re-derives the expected verdicts with the engine
//! rather than asserting them.

use crate::cohomology::{
    class_is_trivial, cohomology_dims, differential, h1_dim_fast, prop23_check, Cochain,
    Prop23Outcome, Settings,
};
use crate::error::{Error, Result};
use crate::gamma::{
    act_laurent, gain_certificate, invert_gamma_minus_one, level_generators, nonzero_labels,
    procyclic_vanishing, GainCertificate, GammaElem, VanishingVerdict,
};
use crate::gmodule::{Extension, GModule, Ring};
use crate::groups::{Perm, PermGroup};
use crate::linalg::FpMatrix;
use crate::linalg::ZpkMatrix;
use crate::tate::{decompose, random_elem, recompose, rep_params, LaurentElem, TateParams, Val};
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

/// Permutation module of `group` on its natural points over `ring`.
pub fn permutation_module(group: Arc<PermGroup>, ring: Ring) -> Result<GModule> {
    let n = group.degree();
    let gen_actions = group
        .generators()
        .iter()
        .map(|s| {
            let mut m = ZpkMatrix::zero(ring.p, ring.k, n, n);
            for x in 0..n {
                m.set(s.apply(x), x, 1);
            }
            m
        })
        .collect();
    GModule::new(group, ring, gen_actions)
}

/// Extend values on the generators to the full 1-cochain table by the
/// crossed-homomorphism rule f(s·h) = f(s) + s·f(h) along the BFS spanning
/// tree, then certify the cocycle identity globally.
pub fn crossed_hom_from_generators(m: &GModule, gen_values: &[Vec<u64>]) -> Result<Cochain> {
    let g = m.group().clone();
    if gen_values.len() != g.generators().len() {
        return Err(Error::Precondition(format!(
            "need {} generator values, got {}",
            g.generators().len(),
            gen_values.len()
        )));
    }
    let md = m.ring().modulus();
    let dim = m.dim();
    let mut table = vec![vec![0u64; dim]; g.order()];
    for idx in 1..g.order() {
        let (par, gi) = g.parent(idx);
        let s = g
            .index_of(&g.generators()[gi])
            .ok_or_else(|| Error::Construction("generator missing from closure".into()))?;
        let mut v = m.act_vec(s, &table[par]);
        for (a, &b) in v.iter_mut().zip(&gen_values[gi]) {
            *a = (*a + b) % md;
        }
        table[idx] = v;
    }
    let f = Cochain::from_table(m, 1, table)?;
    if !differential(&f).is_zero() {
        return Err(Error::Construction(
            "generator values do not extend to a crossed homomorphism".into(),
        ));
    }
    Ok(f)
}

fn s3_group() -> Result<Arc<PermGroup>> {
    let a = Perm::from_cycles(3, &[&[0, 1, 2]])?;
    let b = Perm::from_cycles(3, &[&[0, 1]])?;
    Ok(Arc::new(PermGroup::closure(3, vec![a, b], 100)?))
}

fn sign_module(g: &Arc<PermGroup>, p: u64) -> Result<GModule> {
    let gen_actions = g
        .generators()
        .iter()
        .map(|s| {
            let sign = if s.is_even() { 1 } else { p - 1 };
            ZpkMatrix::new(p, 1, 1, 1, vec![sign])
        })
        .collect::<Result<Vec<_>>>()?;
    GModule::new(g.clone(), Ring::fp(p), gen_actions)
}

// ---------------------------------------------------------------------------
// S₃ with the sign module over F₃
// ---------------------------------------------------------------------------

pub struct S3SignScenario {
    pub id: &'static str,
    pub group: Arc<PermGroup>,
    /// generated by a transposition
    pub subgroup: Arc<PermGroup>,
    /// F₃ with the sign action of S₃
    pub module: GModule,
    /// the explicit crossed homomorphism sending one 3-cycle to +1
    pub crossed_hom: Cochain,
}

#[derive(Debug, Serialize)]
pub struct S3SignReport {
    #[serde(rename = "H1_G")]
    pub h1_g: usize,
    #[serde(rename = "H_H")]
    pub h_h: Vec<usize>,
    /// value of the crossed homomorphism on each of the two 3-cycles
    pub values_on_3_cycles: Vec<u64>,
    pub class_nonzero: bool,
    pub pass: bool,
}

pub fn build_s3_sign() -> Result<S3SignScenario> {
    let group = s3_group()?;
    let module = sign_module(&group, 3)?;
    let t = Perm::from_cycles(3, &[&[0, 1]])?;
    let subgroup = Arc::new(PermGroup::closure(3, vec![t], 100)?);
    // +1 on the 3-cycle generator, 0 on the transposition generator
    let crossed_hom = crossed_hom_from_generators(&module, &[vec![1], vec![0]])?;
    Ok(S3SignScenario {
        id: "ex2.4",
        group,
        subgroup,
        module,
        crossed_hom,
    })
}

impl S3SignScenario {
    pub fn verify(&self, settings: &Settings) -> Result<S3SignReport> {
        let g_report = cohomology_dims(&self.module, 1, settings)?;
        let h1_g = g_report.degrees[1].dim();
        let restricted = self.module.restrict(self.subgroup.clone())?;
        let h_report = cohomology_dims(&restricted, 2, settings)?;
        let h_h: Vec<usize> = h_report.degrees.iter().map(|d| d.dim()).collect();
        let mut values_on_3_cycles = Vec::new();
        for (i, e) in self.group.elements().iter().enumerate() {
            if e.order() == 3 {
                values_on_3_cycles.push(self.crossed_hom.value(&[i])[0]);
            }
        }
        values_on_3_cycles.sort_unstable();
        let class_nonzero = class_is_trivial(&self.crossed_hom)?.is_none();
        let pass =
            h1_g == 1 && h_h == vec![0, 0, 0] && values_on_3_cycles == vec![1, 2] && class_nonzero;
        Ok(S3SignReport {
            h1_g,
            h_h,
            values_on_3_cycles,
            class_nonzero,
            pass,
        })
    }
}

// ---------------------------------------------------------------------------
// Steinberg modules of SL₂(F_q), q = 2, 3
// ---------------------------------------------------------------------------

pub struct SteinbergScenario {
    pub id: String,
    pub q: u64,
    pub group: Arc<PermGroup>,
    /// Sylow q-subgroup (cyclic)
    pub sylow: PermGroup,
    /// the Steinberg module over F_q
    pub module: GModule,
    /// degrees through which G-cohomology is checked to vanish
    pub max_degree: u32,
}

#[derive(Debug, Serialize)]
pub struct SteinbergReport {
    pub order: usize,
    pub free_over_sylow: bool,
    pub g_dims: Vec<usize>,
    /// invariants of the restriction to the index-2 cyclic subgroup (q = 2)
    pub a3_h0: Option<usize>,
    pub pass: bool,
}

pub fn build_steinberg_small(q: u64) -> Result<SteinbergScenario> {
    match q {
        2 => {
            let group = s3_group()?;
            // natural 2-dimensional module over F₂; the constructor's
            // relation check certifies the assignment
            let a = ZpkMatrix::new(2, 1, 2, 2, vec![0, 1, 1, 1])?;
            let b = ZpkMatrix::new(2, 1, 2, 2, vec![0, 1, 1, 0])?;
            let module = GModule::new(group.clone(), Ring::fp(2), vec![a, b])?;
            let sylow = group.sylow_p(2)?;
            Ok(SteinbergScenario {
                id: "ex2.3-q2".into(),
                q,
                group,
                sylow,
                module,
                max_degree: 3,
            })
        }
        3 => {
            // vectors of F₃² \ {0} in a fixed order
            let vecs: Vec<(u64, u64)> = (0..3u64)
                .flat_map(|x| (0..3u64).map(move |y| (x, y)))
                .filter(|&(x, y)| (x, y) != (0, 0))
                .collect();
            let vec_index = |x: u64, y: u64| -> usize {
                vecs.iter()
                    .position(|&v| v == (x, y))
                    .expect("nonzero vector")
            };
            let apply = |m: [[u64; 2]; 2], x: u64, y: u64| -> (u64, u64) {
                (
                    (m[0][0] * x + m[0][1] * y) % 3,
                    (m[1][0] * x + m[1][1] * y) % 3,
                )
            };
            let s_mat = [[0, 2], [1, 0]];
            let t_mat = [[1, 1], [0, 1]];
            let perm_of = |m: [[u64; 2]; 2]| -> Result<Perm> {
                Perm::new(
                    vecs.iter()
                        .map(|&(x, y)| {
                            let (nx, ny) = apply(m, x, y);
                            vec_index(nx, ny)
                        })
                        .collect(),
                )
            };
            let group = Arc::new(PermGroup::closure(
                8,
                vec![perm_of(s_mat)?, perm_of(t_mat)?],
                100,
            )?);
            if group.order() != 24 {
                return Err(Error::Construction(format!(
                    "expected group of order 24, closure has {}",
                    group.order()
                )));
            }
            // lines of P¹(F₃): representatives (1,0), (1,1), (1,2), (0,1)
            let lines: Vec<(u64, u64)> = vec![(1, 0), (1, 1), (1, 2), (0, 1)];
            let normalize = |x: u64, y: u64| -> (u64, u64) {
                if x != 0 {
                    // scale so the first coordinate is 1 (inverse of x mod 3)
                    let inv = if x == 1 { 1 } else { 2 };
                    (1, (y * inv) % 3)
                } else {
                    (0, 1)
                }
            };
            let line_index = |x: u64, y: u64| -> usize {
                let n = normalize(x, y);
                lines.iter().position(|&l| l == n).expect("line")
            };
            let line_action = |m: [[u64; 2]; 2]| -> ZpkMatrix {
                let mut a = ZpkMatrix::zero(3, 1, 4, 4);
                for (i, &(x, y)) in lines.iter().enumerate() {
                    let (nx, ny) = apply(m, x, y);
                    a.set(line_index(nx, ny), i, 1);
                }
                a
            };
            let perm4 = GModule::new(
                group.clone(),
                Ring::fp(3),
                vec![line_action(s_mat), line_action(t_mat)],
            )?;
            // Steinberg = coordinate-sum-zero subspace of the P¹ permutation
            // module (the nontrivial constituent)
            let basis: Vec<Vec<u64>> = (0..3)
                .map(|i| {
                    let mut v = vec![0u64; 4];
                    v[i] = 1;
                    v[3] = 2;
                    v
                })
                .collect();
            let ext = Extension::from_submodule(&perm4, &basis)?;
            let module = ext.sub().clone();
            let sylow = group.sylow_p(3)?;
            Ok(SteinbergScenario {
                id: "ex2.3-q3".into(),
                q,
                group,
                sylow,
                module,
                max_degree: 2,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "Steinberg catalog covers q = 2, 3 only, got {q}"
        ))),
    }
}

impl SteinbergScenario {
    pub fn verify(&self, settings: &Settings) -> Result<SteinbergReport> {
        let free_over_sylow = self.module.free_over_cyclic(&self.sylow)?;
        let report = cohomology_dims(&self.module, self.max_degree, settings)?;
        let g_dims: Vec<usize> = report.degrees.iter().map(|d| d.dim()).collect();
        let a3_h0 = if self.q == 2 {
            let c = Perm::from_cycles(3, &[&[0, 1, 2]])?;
            let a3 = Arc::new(PermGroup::closure(3, vec![c], 100)?);
            Some(self.module.restrict(a3)?.invariants_dim())
        } else {
            None
        };
        let pass =
            free_over_sylow && g_dims.iter().all(|&d| d == 0) && a3_h0.map_or(true, |d| d == 0);
        Ok(SteinbergReport {
            order: self.group.order(),
            free_over_sylow,
            g_dims,
            a3_h0,
            pass,
        })
    }
}

// ---------------------------------------------------------------------------
// Sp₄(F₂) ≅ S₆ on the 4-dimensional symplectic quotient over F₂
// ---------------------------------------------------------------------------

pub struct Sp4Scenario {
    pub id: &'static str,
    /// order 720
    pub group: Arc<PermGroup>,
    /// order 36, product of two disjoint S₃ factors
    pub subgroup: Arc<PermGroup>,
    pub factor1: Arc<PermGroup>,
    pub factor2: Arc<PermGroup>,
    /// index in `group` of the element conjugating the standard embedding
    /// into the one whose splitting checks pass
    pub conjugator: usize,
    /// M = M′/K, dimension 4
    pub module: GModule,
    /// M′: the even-weight subspace, dimension 5
    pub mprime: GModule,
    /// 0 → K → M′ → M → 0
    pub extension: Extension,
    /// rank of the bilinear form b on M′
    pub b_rank: usize,
    /// basis (in M coordinates) of the summand fixed by factor2
    pub m1_basis: Vec<Vec<u64>>,
    /// basis of the summand fixed by factor1
    pub m2_basis: Vec<Vec<u64>>,
}

#[derive(Debug, Serialize)]
pub struct Sp4Report {
    pub order: usize,
    pub subgroup_order: usize,
    pub b_rank: usize,
    pub split: bool,
    pub h1_g: usize,
    pub h_dims: Vec<usize>,
    pub pass: bool,
}

/// Quadratic form q(v) = (wt(v)/2) mod 2 on an even-weight vector given in
/// M′ coordinates.
fn quad_form(basis: &[Vec<u64>], coords: &[u64]) -> u64 {
    let dim = basis[0].len();
    let mut v = vec![0u64; dim];
    for (c, b) in coords.iter().zip(basis) {
        for (x, &y) in v.iter_mut().zip(b) {
            *x = (*x + c * y) % 2;
        }
    }
    let wt: u64 = v.iter().sum();
    debug_assert_eq!(wt % 2, 0);
    (wt / 2) % 2
}

pub fn build_sp4() -> Result<Sp4Scenario> {
    let g1 = Perm::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]])?;
    let g2 = Perm::from_cycles(6, &[&[0, 1]])?;
    let group = Arc::new(PermGroup::closure(6, vec![g1, g2], 1000)?);
    if group.order() != 720 {
        return Err(Error::Construction(format!(
            "expected order 720, closure has {}",
            group.order()
        )));
    }
    let perm = permutation_module(group.clone(), Ring::fp(2))?;
    // even-weight subspace: e_i + e_{i+1}
    let basis: Vec<Vec<u64>> = (0..5)
        .map(|i| {
            let mut v = vec![0u64; 6];
            v[i] = 1;
            v[i + 1] = 1;
            v
        })
        .collect();
    let even_ext = Extension::from_submodule(&perm, &basis)?;
    let mprime = even_ext.sub().clone();
    // q-invariance of the action on all 32 vectors of M′
    for a in mprime.gen_actions() {
        for code in 0..32u64 {
            let coords: Vec<u64> = (0..5).map(|i| (code >> i) & 1).collect();
            let moved = a.mul_vec(&coords)?;
            if quad_form(&basis, &coords) != quad_form(&basis, &moved) {
                return Err(Error::Construction(
                    "action does not preserve the quadratic form".into(),
                ));
            }
        }
    }
    // Gram matrix of b(u, v) = q(u+v) + q(u) + q(v)
    let mut gram = FpMatrix::zero(2, 5, 5);
    for i in 0..5 {
        for j in 0..5 {
            let mut ei = vec![0u64; 5];
            ei[i] = 1;
            let mut ej = vec![0u64; 5];
            ej[j] = 1;
            let mut eij = vec![0u64; 5];
            eij[i] = (eij[i] + 1) % 2;
            eij[j] = (eij[j] + 1) % 2;
            let b = (quad_form(&basis, &eij) + quad_form(&basis, &ei) + quad_form(&basis, &ej)) % 2;
            gram.set(i, j, b);
        }
    }
    let b_rank = gram.rank();
    if b_rank != 4 {
        return Err(Error::Construction(format!(
            "bilinear form has rank {b_rank}, expected 4"
        )));
    }
    // K = radical of b = span of the all-ones vector, in M′ coordinates
    let mut cols = FpMatrix::zero(2, 6, 5);
    for (c, v) in basis.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            cols.set(r, c, x);
        }
    }
    let k_coords = cols
        .solve(&vec![1u64; 6])?
        .ok_or_else(|| Error::Construction("all-ones vector is not even-weight?".into()))?;
    // radical certification: b(k, e_i) = 0 for all i
    for i in 0..5 {
        let v: u64 = (0..5).map(|j| gram.get(i, j) * k_coords[j]).sum::<u64>() % 2;
        if v != 0 {
            return Err(Error::Construction("K is not in the radical of b".into()));
        }
    }
    let extension = Extension::from_submodule(&mprime, &[k_coords])?;
    let module = extension.quotient().clone();

    // order-36 subgroup: search conjugates of the standard S₃×S₃ embedding
    // until the splitting M = M₁ ⊕ M₂ certifies, and record the conjugator
    let h_gens = [
        Perm::from_cycles(6, &[&[0, 1, 2]])?,
        Perm::from_cycles(6, &[&[0, 1]])?,
        Perm::from_cycles(6, &[&[3, 4, 5]])?,
        Perm::from_cycles(6, &[&[3, 4]])?,
    ];
    let mut found = None;
    for gi in 0..group.order() {
        let g = group.element(gi);
        let ginv = g.inverse();
        let conj: Vec<Perm> = h_gens.iter().map(|h| g.compose(h).compose(&ginv)).collect();
        let factor1 = Arc::new(PermGroup::closure(6, conj[..2].to_vec(), 100)?);
        let factor2 = Arc::new(PermGroup::closure(6, conj[2..].to_vec(), 100)?);
        let subgroup = Arc::new(PermGroup::closure(6, conj.clone(), 100)?);
        if subgroup.order() != 36 || factor1.order() != 6 || factor2.order() != 6 {
            continue;
        }
        let m1: Vec<Vec<u64>> = module
            .restrict(factor2.clone())?
            .invariants()
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        let m2: Vec<Vec<u64>> = module
            .restrict(factor1.clone())?
            .invariants()
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        if m1.len() != 2 || m2.len() != 2 {
            continue;
        }
        let stacked = FpMatrix::new(2, 4, 4, m1.iter().chain(&m2).flatten().copied().collect())?;
        if stacked.rank() != 4 {
            continue;
        }
        found = Some((subgroup, factor1, factor2, gi, m1, m2));
        break;
    }
    let (subgroup, factor1, factor2, conjugator, m1_basis, m2_basis) = found.ok_or_else(|| {
        Error::Construction("no conjugate of the standard embedding splits M".into())
    })?;
    Ok(Sp4Scenario {
        id: "ex2.6",
        group,
        subgroup,
        factor1,
        factor2,
        conjugator,
        module,
        mprime,
        extension,
        b_rank,
        m1_basis,
        m2_basis,
    })
}

impl Sp4Scenario {
    pub fn verify(&self, settings: &Settings) -> Result<Sp4Report> {
        let split = self.extension.split_check()?.is_some();
        let h1_g = h1_dim_fast(&self.module)?;
        let restricted = self.module.restrict(self.subgroup.clone())?;
        let h_report = cohomology_dims(&restricted, 2, settings)?;
        let h_dims: Vec<usize> = h_report.degrees.iter().map(|d| d.dim()).collect();
        let pass = self.group.order() == 720
            && self.b_rank == 4
            && !split
            && h1_g >= 1
            && h_dims == vec![0, 0, 0];
        Ok(Sp4Report {
            order: self.group.order(),
            subgroup_order: self.subgroup.order(),
            b_rank: self.b_rank,
            split,
            h1_g,
            h_dims,
            pass,
        })
    }
}

// ---------------------------------------------------------------------------
// Z/2 acting on Z/9 by negation
// ---------------------------------------------------------------------------

pub struct Remark22Scenario {
    pub id: &'static str,
    pub group: Arc<PermGroup>,
    /// Z/9 with the negation action
    pub module: GModule,
}

#[derive(Debug, Serialize)]
pub struct Remark22Report {
    pub g_dims: Vec<usize>,
    pub trivial_h0_order: u128,
    pub prop23: Prop23Outcome,
    pub pass: bool,
}

pub fn build_remark22_witness() -> Result<Remark22Scenario> {
    let t = Perm::from_cycles(2, &[&[0, 1]])?;
    let group = Arc::new(PermGroup::closure(2, vec![t], 10)?);
    let neg = ZpkMatrix::new(3, 2, 1, 1, vec![8])?;
    let module = GModule::new(group.clone(), Ring::zpk(3, 2), vec![neg])?;
    Ok(Remark22Scenario {
        id: "rem2.2",
        group,
        module,
    })
}

impl Remark22Scenario {
    pub fn verify(&self, settings: &Settings) -> Result<Remark22Report> {
        let report = cohomology_dims(&self.module, 3, settings)?;
        let g_dims: Vec<usize> = report.degrees.iter().map(|d| d.dim()).collect();
        let trivial = Arc::new(PermGroup::trivial(2));
        let trivial_h0_order = self.module.restrict(trivial)?.invariants_order();
        let prop23 = prop23_check(&self.module, settings)?;
        let pass =
            g_dims == vec![0, 0, 0, 0] && trivial_h0_order == 9 && prop23.a_holds && prop23.b_holds;
        Ok(Remark22Report {
            g_dims,
            trivial_h0_order,
            prop23,
            pass,
        })
    }
}

// ---------------------------------------------------------------------------
// Procyclic actions on F and on the Tate algebra (fractional labels)
// ---------------------------------------------------------------------------

pub struct PadicScenario {
    pub id: String,
    pub params: TateParams,
    /// level-0 generators of Γ₀: cyclotomic 1+p² first, then translations
    pub generators: Vec<GammaElem>,
    pub labels: Vec<Vec<u8>>,
}

#[derive(Debug, Serialize)]
pub struct PadicReport {
    pub label_count: usize,
    /// exact gain of the cyclotomic generator on the unit 1+π
    pub cyclotomic_gain_on_unit: Option<i64>,
    /// absolute valuation of (γ−1)π for the cyclotomic generator
    pub cyclotomic_abs_on_pi: Option<i64>,
    /// exact gains of the cyclotomic generator on labels with e₀ ≠ 0 and
    /// all other components zero
    pub cyclotomic_label_gains: Vec<i64>,
    /// exact gains of translation j on t_j
    pub translation_ring_gains: Vec<i64>,
    /// exact gains of translation j on labels with e_j ≠ 0
    pub translation_label_gains: Vec<i64>,
    /// decomposition round trips that reproduced the input exactly
    pub roundtrip_ok: usize,
    pub roundtrip_total: usize,
    /// residual targets met by the (γ−1)-solver, one per sampled label
    pub solver_ok: usize,
    pub solver_total: usize,
    /// per-label vanishing verdicts: true = Vanishes at full precision
    pub vanishing: Vec<bool>,
    pub pass: bool,
}

pub fn build_ex54(p: u64, prec: i64) -> Result<PadicScenario> {
    let params = TateParams {
        p,
        d: 0,
        prec,
        deg_cap: 2,
    };
    let generators = level_generators(p, params.exponent_levels(), 0, 0);
    let labels = nonzero_labels(&params);
    Ok(PadicScenario {
        id: format!("ex5.4-p{p}"),
        params,
        generators,
        labels,
    })
}

pub fn build_ex56(p: u64, d: usize, prec: i64, deg_cap: usize) -> Result<PadicScenario> {
    if d == 0 {
        return Err(Error::Precondition(
            "the Tate-algebra scenario needs d >= 1; use the d = 0 builder".into(),
        ));
    }
    let params = TateParams {
        p,
        d,
        prec,
        deg_cap,
    };
    let generators = level_generators(p, params.exponent_levels(), d, 0);
    let labels = nonzero_labels(&params);
    Ok(PadicScenario {
        id: format!("ex5.6-p{p}d{d}"),
        params,
        generators,
        labels,
    })
}

fn entry_gain(cert: &GainCertificate, description: &str) -> Option<i64> {
    cert.entries
        .iter()
        .find(|e| e.description == description && e.exact)
        .and_then(|e| e.gain)
}

impl PadicScenario {
    /// Generator picked to witness invertibility on a given label: the
    /// cyclotomic generator when e₀ ≠ 0, otherwise the translation for the
    /// first nonzero component.
    pub fn witness_generator(&self, label: &[u8]) -> &GammaElem {
        if label[0] != 0 {
            &self.generators[0]
        } else {
            let j = label.iter().position(|&e| e != 0).expect("nonzero label");
            &self.generators[j]
        }
    }

    pub fn verify(&self, rng: &mut impl Rng) -> Result<PadicReport> {
        let p = self.params.p as i64;
        let d = self.params.d;
        let cert = gain_certificate(&self.params, 0)?;
        let cyclotomic_gain_on_unit = entry_gain(&cert, "cyclotomic on 1+pi");
        // absolute valuation of (γ−1)π
        let pi = LaurentElem::pi(self.params.p, self.params.prec);
        let moved = act_laurent(&self.generators[0], &pi)?.sub(&pi)?;
        let cyclotomic_abs_on_pi = match moved.val() {
            Val::Exact(v) => Some(v),
            Val::AtLeast(_) => None,
        };
        let mut cyclotomic_label_gains = Vec::new();
        let mut translation_label_gains = Vec::new();
        let mut translation_ring_gains = Vec::new();
        for label in &self.labels {
            if label[0] != 0 && label[1..].iter().all(|&e| e == 0) {
                if let Some(g) = entry_gain(&cert, &format!("cyclotomic on label {label:?}")) {
                    cyclotomic_label_gains.push(g);
                }
            }
            for j in 1..=d {
                if label[j] != 0 {
                    if let Some(g) =
                        entry_gain(&cert, &format!("translation-{j} on label {label:?}"))
                    {
                        translation_label_gains.push(g);
                    }
                }
            }
        }
        for j in 1..=d {
            if let Some(g) = entry_gain(&cert, &format!("translation-{j} on t{j}")) {
                translation_ring_gains.push(g);
            }
        }

        // decomposition round trip on random elements of the p-th root ring
        let rp = rep_params(&self.params);
        let roundtrip_total = 100;
        let mut roundtrip_ok = 0;
        for _ in 0..roundtrip_total {
            let x = random_elem(rng, &rp, 0);
            let (r_part, frac) = decompose(&x, &self.params)?;
            if recompose(&r_part, &frac, &self.params)? == x {
                roundtrip_ok += 1;
            }
        }

        // solver residuals at full precision on each label
        let mut solver_ok = 0;
        let mut solver_total = 0;
        for label in &self.labels {
            let gamma = self.witness_generator(label);
            for _ in 0..2 {
                solver_total += 1;
                let w = random_elem(rng, &self.params, 0);
                if invert_gamma_minus_one(gamma, label, &w, self.params.prec).is_ok() {
                    solver_ok += 1;
                }
            }
        }

        // vanishing verdict per label summand
        let mut vanishing = Vec::new();
        for label in &self.labels {
            let gamma = self.witness_generator(label);
            let verdict = procyclic_vanishing(gamma, label, &self.params, self.params.prec, rng)?;
            vanishing.push(matches!(verdict, VanishingVerdict::Vanishes { .. }));
        }

        let expected_labels = self.params.p.pow(d as u32 + 1) as usize - 1;
        let pass = self.labels.len() == expected_labels
            && cyclotomic_gain_on_unit == Some(p * p)
            && cyclotomic_abs_on_pi == Some(p * p)
            && !cyclotomic_label_gains.is_empty()
            && cyclotomic_label_gains.iter().all(|&g| g == p)
            && translation_ring_gains.iter().all(|&g| g == p)
            && translation_ring_gains.len() == d
            && translation_label_gains.iter().all(|&g| g == 1)
            && roundtrip_ok == roundtrip_total
            && solver_ok == solver_total
            && vanishing.iter().all(|&v| v);
        Ok(PadicReport {
            label_count: self.labels.len(),
            cyclotomic_gain_on_unit,
            cyclotomic_abs_on_pi,
            cyclotomic_label_gains,
            translation_ring_gains,
            translation_label_gains,
            roundtrip_ok,
            roundtrip_total,
            solver_ok,
            solver_total,
            vanishing,
            pass,
        })
    }
}

// ---------------------------------------------------------------------------
// Sampling pools for the property suites
// ---------------------------------------------------------------------------

/// All 2-groups of order ≤ 8 as permutation groups (one representative per
/// isomorphism class).
pub fn small_two_groups() -> Result<Vec<(String, Arc<PermGroup>)>> {
    let mut out = Vec::new();
    let mut push = |name: &str, degree: usize, gens: Vec<Perm>| -> Result<()> {
        out.push((
            name.to_string(),
            Arc::new(PermGroup::closure(degree, gens, 100)?),
        ));
        Ok(())
    };
    push("Z2", 2, vec![Perm::from_cycles(2, &[&[0, 1]])?])?;
    push("Z4", 4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])?])?;
    push(
        "Z2xZ2",
        4,
        vec![
            Perm::from_cycles(4, &[&[0, 1]])?,
            Perm::from_cycles(4, &[&[2, 3]])?,
        ],
    )?;
    push(
        "Z8",
        8,
        vec![Perm::from_cycles(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]])?],
    )?;
    push(
        "Z4xZ2",
        6,
        vec![
            Perm::from_cycles(6, &[&[0, 1, 2, 3]])?,
            Perm::from_cycles(6, &[&[4, 5]])?,
        ],
    )?;
    push(
        "Z2xZ2xZ2",
        6,
        vec![
            Perm::from_cycles(6, &[&[0, 1]])?,
            Perm::from_cycles(6, &[&[2, 3]])?,
            Perm::from_cycles(6, &[&[4, 5]])?,
        ],
    )?;
    push(
        "D4",
        4,
        vec![
            Perm::from_cycles(4, &[&[0, 1, 2, 3]])?,
            Perm::from_cycles(4, &[&[0, 2]])?,
        ],
    )?;
    // Q8 in its regular representation: elements 1,−1,i,−i,j,−j,k,−k and
    // left multiplication by i and j
    let qi = Perm::new(vec![2, 3, 1, 0, 6, 7, 5, 4])?;
    let qj = Perm::new(vec![4, 5, 7, 6, 1, 0, 2, 3])?;
    push("Q8", 8, vec![qi, qj])?;
    Ok(out)
}

/// A random G-module of odd order for a 2-group: a coset permutation module
/// over Z/q^k (q odd) for the cyclic subgroup generated by a random element,
/// optionally twisted by the parity character and/or doubled by a direct sum.
pub fn random_coprime_module(g: &Arc<PermGroup>, rng: &mut impl Rng) -> Result<GModule> {
    let q = *[3u64, 5, 7].iter().nth(rng.gen_range(0..3)).unwrap();
    let k = rng.gen_range(1..=2u32);
    let ring = Ring::zpk(q, k);
    let e = rng.gen_range(0..g.order());
    // left cosets of <e>: canonical id = minimal element index of the coset
    let cyc: Vec<usize> = {
        let mut pow = 0usize; // identity index
        let mut acc = vec![0usize];
        loop {
            pow = g.mul(pow, e);
            if pow == 0 {
                break;
            }
            acc.push(pow);
        }
        acc
    };
    let coset_of =
        |x: usize| -> usize { cyc.iter().map(|&h| g.mul(x, h)).min().expect("nonempty") };
    let mut reps: Vec<usize> = (0..g.order()).map(coset_of).collect();
    reps.sort_unstable();
    reps.dedup();
    let n = reps.len();
    let md = ring.modulus();
    let twist = rng.gen_bool(0.5);
    let gen_actions: Vec<ZpkMatrix> = g
        .generators()
        .iter()
        .map(|s| {
            let si = g.index_of(s).expect("generator");
            let sign = if twist && !s.is_even() { md - 1 } else { 1 };
            let mut m = ZpkMatrix::zero(q, k, n, n);
            for (c, &r) in reps.iter().enumerate() {
                let img = coset_of(g.mul(si, r));
                let row = reps.binary_search(&img).expect("coset rep");
                m.set(row, c, sign);
            }
            m
        })
        .collect();
    let base = GModule::new(g.clone(), ring, gen_actions)?;
    if rng.gen_bool(0.25) {
        let other = random_coprime_module_inner(g, q, k)?;
        base.direct_sum(&other)
    } else {
        Ok(base)
    }
}

fn random_coprime_module_inner(g: &Arc<PermGroup>, q: u64, k: u32) -> Result<GModule> {
    // a second summand over the same ring: the sign-twisted trivial module
    let md = q.pow(k);
    let gen_actions: Vec<ZpkMatrix> = g
        .generators()
        .iter()
        .map(|s| {
            let v = if s.is_even() { 1 } else { md - 1 };
            ZpkMatrix::new(q, k, 1, 1, vec![v])
        })
        .collect::<Result<Vec<_>>>()?;
    GModule::new(g.clone(), Ring::zpk(q, k), gen_actions)
}

/// A random (G, H ⊴ G, M) instance with field coefficients, drawn from a
/// fixed pool of small groups with a chosen normal subgroup.
pub fn random_exactness_instance(
    rng: &mut impl Rng,
) -> Result<(Arc<PermGroup>, Arc<PermGroup>, GModule)> {
    let pick = rng.gen_range(0..5);
    let (g, h): (Arc<PermGroup>, Arc<PermGroup>) = match pick {
        0 => {
            let g = s3_group()?;
            let h = Arc::new(PermGroup::closure(
                3,
                vec![Perm::from_cycles(3, &[&[0, 1, 2]])?],
                100,
            )?);
            (g, h)
        }
        1 => {
            let g = Arc::new(PermGroup::closure(
                4,
                vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])?],
                100,
            )?);
            let h = Arc::new(PermGroup::closure(
                4,
                vec![Perm::from_cycles(4, &[&[0, 2], &[1, 3]])?],
                100,
            )?);
            (g, h)
        }
        2 => {
            // D4 with the rotation subgroup
            let g = Arc::new(PermGroup::closure(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 1, 2, 3]])?,
                    Perm::from_cycles(4, &[&[0, 2]])?,
                ],
                100,
            )?);
            let h = Arc::new(PermGroup::closure(
                4,
                vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])?],
                100,
            )?);
            (g, h)
        }
        3 => {
            // Z6 = Z2 × Z3 with the Z3 part
            let g = Arc::new(PermGroup::closure(
                5,
                vec![
                    Perm::from_cycles(5, &[&[0, 1, 2]])?,
                    Perm::from_cycles(5, &[&[3, 4]])?,
                ],
                100,
            )?);
            let h = Arc::new(PermGroup::closure(
                5,
                vec![Perm::from_cycles(5, &[&[0, 1, 2]])?],
                100,
            )?);
            (g, h)
        }
        _ => {
            // S3 with itself (quotient trivial)
            let g = s3_group()?;
            (g.clone(), g)
        }
    };
    let p = *[2u64, 3, 5].iter().nth(rng.gen_range(0..3)).unwrap();
    let kind = rng.gen_range(0..3);
    let m = match kind {
        0 => permutation_module(g.clone(), Ring::fp(p))?,
        1 => sign_module(&g, p)
            .or_else(|_| Ok::<_, Error>(GModule::trivial(g.clone(), Ring::fp(p), 1)))?,
        _ => GModule::trivial(g.clone(), Ring::fp(p), rng.gen_range(1..3)),
    };
    Ok((g, h, m))
}

// ---------------------------------------------------------------------------
// Named dispatch
// ---------------------------------------------------------------------------

pub enum Scenario {
    S3Sign(S3SignScenario),
    Steinberg(SteinbergScenario),
    Sp4(Box<Sp4Scenario>),
    Remark22(Remark22Scenario),
    Padic(PadicScenario),
}

pub fn scenario_ids() -> Vec<&'static str> {
    vec![
        "ex2.4",
        "ex2.3-q2",
        "ex2.3-q3",
        "ex2.6",
        "rem2.2",
        "ex5.4-p2",
        "ex5.4-p3",
        "ex5.4-p5",
        "ex5.6-p2d1",
        "ex5.6-p2d2",
        "ex5.6-p3d1",
    ]
}

fn default_prec(p: u64) -> i64 {
    2 * (p * p) as i64 + 8
}

pub fn build_scenario(id: &str) -> Result<Scenario> {
    match id {
        "ex2.4" => Ok(Scenario::S3Sign(build_s3_sign()?)),
        "ex2.3" | "ex2.3-q2" => Ok(Scenario::Steinberg(build_steinberg_small(2)?)),
        "ex2.3-q3" => Ok(Scenario::Steinberg(build_steinberg_small(3)?)),
        "ex2.6" => Ok(Scenario::Sp4(Box::new(build_sp4()?))),
        "rem2.2" => Ok(Scenario::Remark22(build_remark22_witness()?)),
        "ex5.4" | "ex5.4-p2" => Ok(Scenario::Padic(build_ex54(2, default_prec(2))?)),
        "ex5.4-p3" => Ok(Scenario::Padic(build_ex54(3, default_prec(3))?)),
        "ex5.4-p5" => Ok(Scenario::Padic(build_ex54(5, default_prec(5))?)),
        "ex5.6" | "ex5.6-p2d1" => Ok(Scenario::Padic(build_ex56(2, 1, default_prec(2), 4)?)),
        "ex5.6-p2d2" => Ok(Scenario::Padic(build_ex56(2, 2, default_prec(2), 4)?)),
        "ex5.6-p3d1" => Ok(Scenario::Padic(build_ex56(3, 1, default_prec(3), 4)?)),
        _ => Err(Error::Format(format!("unknown scenario id: {id}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn s3_sign_scenario_passes() {
        let sc = build_s3_sign().unwrap();
        let report = sc.verify(&Settings::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn steinberg_q2_passes() {
        let sc = build_steinberg_small(2).unwrap();
        assert_eq!(sc.group.order(), 6);
        assert_eq!(sc.sylow.order(), 2);
        let report = sc.verify(&Settings::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn steinberg_q3_structure() {
        let sc = build_steinberg_small(3).unwrap();
        assert_eq!(sc.group.order(), 24);
        assert_eq!(sc.sylow.order(), 3);
        assert_eq!(sc.module.dim(), 3);
        assert!(sc.module.free_over_cyclic(&sc.sylow).unwrap());
        // degrees 0 and 1 are quick; degree 2 runs in the acceptance suite
        let report = cohomology_dims(&sc.module, 1, &Settings::default()).unwrap();
        assert!(report.all_zero());
    }

    #[test]
    fn remark22_scenario_passes() {
        let sc = build_remark22_witness().unwrap();
        let report = sc.verify(&Settings::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn sp4_structure_certifies() {
        let sc = build_sp4().unwrap();
        assert_eq!(sc.group.order(), 720);
        assert_eq!(sc.subgroup.order(), 36);
        assert_eq!(sc.b_rank, 4);
        assert_eq!(sc.module.dim(), 4);
        assert_eq!(sc.mprime.dim(), 5);
        assert_eq!(sc.conjugator, 0, "standard embedding should split M");
        // nonsplit extension and H¹(G, M) ≠ 0
        assert!(sc.extension.split_check().unwrap().is_none());
        assert!(h1_dim_fast(&sc.module).unwrap() >= 1);
    }

    #[test]
    fn ex54_p2_passes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sc = build_ex54(2, default_prec(2)).unwrap();
        let report = sc.verify(&mut rng).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn ex56_p2d1_passes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let sc = build_ex56(2, 1, default_prec(2), 4).unwrap();
        let report = sc.verify(&mut rng).unwrap();
        assert_eq!(report.label_count, 3);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn two_group_pool_and_coprime_modules() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let groups = small_two_groups().unwrap();
        assert_eq!(groups.len(), 8);
        for (name, g) in &groups {
            assert!(g.order() <= 8, "{name}");
            assert!(g.order().is_power_of_two(), "{name}");
        }
        for _ in 0..10 {
            let (_, g) = &groups[rng.gen_range(0..groups.len())];
            let m = random_coprime_module(g, &mut rng).unwrap();
            assert!(m.ring().p % 2 == 1);
        }
    }

    #[test]
    fn exactness_pool_draws_normal_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let (g, h, m) = random_exactness_instance(&mut rng).unwrap();
            assert!(g.is_normal_subgroup(&h).unwrap());
            assert_eq!(m.group().order(), g.order());
        }
    }

    #[test]
    fn unknown_scenario_id_is_a_format_error() {
        assert!(matches!(build_scenario("nope"), Err(Error::Format(_))));
    }
}


#[cfg(test)]
mod slow_probe2 {
    use super::*;

    #[test]
    #[ignore]
    fn steinberg_q3_degree2_timing() {
        let sc = build_steinberg_small(3).unwrap();
        let t = std::time::Instant::now();
        let report = cohomology_dims(&sc.module, 2, &Settings::default()).unwrap();
        println!("q3 deg2: {:?} dims {:?}", t.elapsed(), report.degrees);
    }
}
