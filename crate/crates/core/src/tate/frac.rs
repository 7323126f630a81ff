//! The label decomposition of φ⁻¹(R)/R.
//!
//! φ⁻¹(R) is modeled as a Tate algebra in the fractional-power variables
//! π̃ = π^{1/p} and t̃_j = t_j^{1/p} ("the rep ring"): π̃^p = π exactly, and
//! in characteristic p also (1+π)^{1/p} = 1 + π̃. An element splits as a sum
//! over labels (e_0,...,e_d) in {0..p-1}^{d+1} of basis monomials
//! (1+π)^{e_0/p} t^{e/p} with coefficients in R; label 0 is the R-part.
//! The split uses only π̃^r = ((1+π̃) - 1)^r expanded by binomials with
//! r < p, so everything is exact: decompose and recompose invert each other
//! on the nose.

use super::laurent::{LaurentElem, Val};
use super::series::TateElem;
use super::TateParams;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Parameters of the fractional-variable model of φ⁻¹(R): same p and d,
/// precision and degree cap scaled so that 1/p-exponents become integers.
pub fn rep_params(r: &TateParams) -> TateParams {
    TateParams {
        p: r.p,
        d: r.d,
        prec: r.prec * r.p as i64,
        deg_cap: r.deg_cap * r.p as usize + r.d * (r.p as usize - 1),
    }
}

/// An element of φ⁻¹(R)/R: components indexed by nonzero labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracElem {
    params: TateParams,
    comps: BTreeMap<Vec<u8>, TateElem>,
}

impl FracElem {
    pub fn zero(params: &TateParams) -> Self {
        FracElem {
            params: params.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &TateParams {
        &self.params
    }

    pub fn label_count(params: &TateParams) -> usize {
        (params.p as usize).pow(params.d as u32 + 1) - 1
    }

    pub fn component(&self, label: &[u8]) -> TateElem {
        self.comps
            .get(label)
            .cloned()
            .unwrap_or_else(|| TateElem::zero(&self.params))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<u8>, &TateElem)> + '_ {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn set_component(&mut self, label: &[u8], x: TateElem) -> Result<()> {
        if label.len() != self.params.d + 1 || label.iter().all(|&e| e == 0) {
            return Err(Error::Format("label must be nonzero of length d+1".into()));
        }
        if label.iter().any(|&e| e as u64 >= self.params.p) {
            return Err(Error::Format("label entry out of range".into()));
        }
        if x.is_zero() {
            self.comps.remove(label);
        } else {
            self.comps.insert(label.to_vec(), x);
        }
        Ok(())
    }

    pub fn add_component(&mut self, label: &[u8], x: &TateElem) -> Result<()> {
        let sum = self.component(label).add(x)?;
        self.set_component(label, sum)
    }

    pub fn add(&self, other: &FracElem) -> Result<FracElem> {
        let mut out = self.clone();
        for (l, x) in other.components() {
            out.add_component(l, x)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FracElem) -> Result<FracElem> {
        let mut out = self.clone();
        for (l, x) in other.components() {
            out.add_component(l, &x.neg())?;
        }
        Ok(out)
    }

    /// R-module structure: scale every component.
    pub fn scale(&self, r: &TateElem) -> Result<FracElem> {
        let mut out = FracElem::zero(&self.params);
        for (l, x) in self.components() {
            out.add_component(l, &x.mul(r)?)?;
        }
        Ok(out)
    }

    pub fn scale_laurent(&self, c: &LaurentElem) -> Result<FracElem> {
        let mut out = FracElem::zero(&self.params);
        for (l, x) in self.components() {
            out.add_component(l, &x.scale(c)?)?;
        }
        Ok(out)
    }

    /// Gauss valuation in π-units; basis monomials have valuation 0, so this
    /// is the min over components.
    pub fn val(&self) -> Val {
        let mut best: Option<i64> = None;
        for x in self.comps.values() {
            if let Val::Exact(v) = x.val() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        match best {
            Some(v) => Val::Exact(v),
            None => Val::AtLeast(self.params.prec),
        }
    }
}

fn binom_small(r: u32, s: u32) -> u64 {
    // r < p <= 7 in practice; exact integer binomial
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..s as u64 {
        num *= r as u64 - i;
        den *= i + 1;
    }
    num / den
}

/// Split an element of φ⁻¹(R) (given in the rep ring) into its R-part and
/// its image in φ⁻¹(R)/R.
pub fn decompose(x: &TateElem, r_params: &TateParams) -> Result<(TateElem, FracElem)> {
    let p = r_params.p;
    if *x.params() != rep_params(r_params) {
        return Err(Error::Precondition(
            "input is not in the fractional model of these parameters".into(),
        ));
    }
    let mut r_part = TateElem::zero(r_params);
    let mut frac = FracElem::zero(r_params);
    for (b, c) in x.terms() {
        let q: Vec<u32> = b.iter().map(|&bj| bj / p as u32).collect();
        let e: Vec<u8> = b.iter().map(|&bj| (bj % p as u32) as u8).collect();
        for (m, coef) in c.terms() {
            let qm = m.div_euclid(p as i64);
            let r = m.rem_euclid(p as i64) as u32;
            for s in 0..=r {
                let mut cc = coef * (binom_small(r, s) % p) % p;
                if (r - s) % 2 == 1 {
                    cc = (p - cc) % p;
                }
                if cc == 0 {
                    continue;
                }
                let piece = TateElem::monomial(
                    r_params,
                    &q,
                    LaurentElem::monomial(p, r_params.prec, qm, cc),
                )?;
                let mut label = vec![s as u8];
                label.extend_from_slice(&e);
                if label.iter().all(|&l| l == 0) {
                    r_part = r_part.add(&piece)?;
                } else {
                    frac.add_component(&label, &piece)?;
                }
            }
        }
    }
    Ok((r_part, frac))
}

/// Embed R into the rep ring: π = π̃^p, t_j = t̃_j^p (this is also the
/// Frobenius identification; coefficients in F_p are fixed).
pub fn to_rep(x: &TateElem, r_params: &TateParams) -> Result<TateElem> {
    if x.params() != r_params {
        return Err(Error::Precondition("element is not in R".into()));
    }
    let rp = rep_params(r_params);
    let p = r_params.p as u32;
    let mut out = TateElem::zero(&rp);
    for (e, c) in x.terms() {
        let exps: Vec<u32> = e.iter().map(|&a| a * p).collect();
        let mut cc = LaurentElem::zero(rp.p, rp.prec);
        for (m, coef) in c.terms() {
            cc = cc.add(&LaurentElem::monomial(rp.p, rp.prec, m * p as i64, coef))?;
        }
        out = out.add(&TateElem::monomial(&rp, &exps, cc)?)?;
    }
    Ok(out)
}

/// Reassemble a rep-ring element from an R-part and labeled components.
pub fn recompose(r_part: &TateElem, frac: &FracElem, r_params: &TateParams) -> Result<TateElem> {
    let rp = rep_params(r_params);
    let mut out = to_rep(r_part, r_params)?;
    for (label, comp) in frac.components() {
        let mut piece = to_rep(comp, r_params)?;
        // (1+π)^{e0/p} = (1+π̃)^{e0}
        let one_pi = LaurentElem::from_terms(rp.p, rp.prec, &[(0, 1), (1, 1)]);
        piece = piece.scale(&one_pi.pow(label[0] as u64)?)?;
        let t_exps: Vec<u32> = label[1..].iter().map(|&e| e as u32).collect();
        piece = piece.mul(&TateElem::monomial(
            &rp,
            &t_exps,
            LaurentElem::one(rp.p, rp.prec),
        )?)?;
        out = out.add(&piece)?;
    }
    Ok(out)
}
