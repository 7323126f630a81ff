//! Truncated Laurent series over F_p: the field F = F_p((π)) at absolute
//! precision N. Terms with exponent >= N are dropped; equality means
//! equality of every stored coefficient. No floating point, no rounding:
//! every operation is exact on the stored window.

use super::padic::PadicInt;
use crate::error::{Error, Result};
use crate::linalg::inv_mod;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElem {
    p: u64,
    prec: i64,
    /// exponent -> nonzero residue
    coeffs: BTreeMap<i64, u64>,
}

/// Valuation of a truncated series: exact when a term is visible, otherwise
/// only the lower bound "at least the precision" is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Val {
    Exact(i64),
    AtLeast(i64),
}

impl Val {
    pub fn exact(self) -> Option<i64> {
        match self {
            Val::Exact(v) => Some(v),
            Val::AtLeast(_) => None,
        }
    }

    /// Lower bound usable in either case.
    pub fn lower_bound(self) -> i64 {
        match self {
            Val::Exact(v) | Val::AtLeast(v) => v,
        }
    }
}

impl LaurentElem {
    pub fn zero(p: u64, prec: i64) -> Self {
        LaurentElem {
            p,
            prec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::monomial(p, prec, 0, 1)
    }

    pub fn pi(p: u64, prec: i64) -> Self {
        Self::monomial(p, prec, 1, 1)
    }

    pub fn monomial(p: u64, prec: i64, exp: i64, coeff: u64) -> Self {
        let mut out = Self::zero(p, prec);
        out.add_term(exp, coeff);
        out
    }

    pub fn from_terms(p: u64, prec: i64, terms: &[(i64, u64)]) -> Self {
        let mut out = Self::zero(p, prec);
        for &(e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> u64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn val(&self) -> Val {
        match self.coeffs.keys().next() {
            Some(&e) => Val::Exact(e),
            None => Val::AtLeast(self.prec),
        }
    }

    fn add_term(&mut self, exp: i64, coeff: u64) {
        if exp >= self.prec {
            return;
        }
        let c = (self.coeffs.get(&exp).copied().unwrap_or(0) + coeff) % self.p;
        if c == 0 {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, c);
        }
    }

    fn check_params(&self, other: &LaurentElem) -> Result<()> {
        if self.p != other.p || self.prec != other.prec {
            return Err(Error::Precondition(format!(
                "parameter mismatch: (p={}, N={}) vs (p={}, N={})",
                self.p, self.prec, other.p, other.prec
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentElem) -> Result<LaurentElem> {
        self.check_params(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentElem {
        let mut out = Self::zero(self.p, self.prec);
        for (e, c) in self.terms() {
            out.add_term(e, self.p - c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentElem) -> Result<LaurentElem> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> LaurentElem {
        let mut out = Self::zero(self.p, self.prec);
        for (e, c) in self.terms() {
            out.add_term(e, c * (k % self.p) % self.p);
        }
        out
    }

    pub fn mul(&self, other: &LaurentElem) -> Result<LaurentElem> {
        self.check_params(other)?;
        let mut out = Self::zero(self.p, self.prec);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                if e1 + e2 >= self.prec {
                    break; // other.terms() ascends in e2
                }
                out.add_term(e1 + e2, c1 * c2 % self.p);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<LaurentElem> {
        let mut base = self.clone();
        let mut out = Self::one(self.p, self.prec);
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    /// Inverse of a unit with visible valuation: c π^v (1+u) with
    /// val(u) >= 1 inverts to c⁻¹ π^{-v} Σ (-u)^k.
    pub fn inverse(&self) -> Result<LaurentElem> {
        let Val::Exact(v) = self.val() else {
            return Err(Error::Precision(
                "cannot invert an element that is zero to precision".into(),
            ));
        };
        let c = self.coeff(v);
        let cinv = inv_mod(c, self.p);
        // u = c⁻¹ π^{-v} x - 1, val >= 1
        let mut u = Self::zero(self.p, self.prec);
        for (e, coef) in self.terms() {
            if e != v {
                u.add_term(e - v, coef * cinv % self.p);
            }
        }
        let minus_u = u.neg();
        let mut geom = Self::one(self.p, self.prec);
        let mut term = Self::one(self.p, self.prec);
        let gain = minus_u.val().lower_bound().max(1);
        let mut total: i64 = 0;
        while total < self.prec + v.abs() {
            term = term.mul(&minus_u)?;
            if term.is_zero() {
                break;
            }
            geom = geom.add(&term)?;
            total += gain;
        }
        let mut out = Self::zero(self.p, self.prec);
        for (e, coef) in geom.terms() {
            out.add_term(e - v, coef * cinv % self.p);
        }
        Ok(out)
    }

    /// Composition f(g) for val(g) >= 1. Laurent tails use the geometric
    /// inverse of g.
    pub fn substitute(&self, g: &LaurentElem) -> Result<LaurentElem> {
        self.check_params(g)?;
        if let Val::Exact(v) = g.val() {
            if v < 1 {
                return Err(Error::Substitution(v));
            }
        }
        let mut out = Self::zero(self.p, self.prec);
        let mut pos_pow = Self::one(self.p, self.prec);
        let mut pos_exp: i64 = 0;
        // positive exponents in increasing order
        for (e, c) in self.terms().filter(|&(e, _)| e >= 0) {
            while pos_exp < e {
                pos_pow = pos_pow.mul(g)?;
                pos_exp += 1;
            }
            for (pe, pc) in pos_pow.terms() {
                out.add_term(pe, pc * c % self.p);
            }
        }
        let neg_exps: Vec<(i64, u64)> = self.terms().filter(|&(e, _)| e < 0).collect();
        if !neg_exps.is_empty() {
            let ginv = g.inverse()?;
            let mut neg_pow = Self::one(self.p, self.prec);
            let mut neg_exp: i64 = 0;
            for &(e, c) in neg_exps.iter().rev() {
                while neg_exp > e {
                    neg_pow = neg_pow.mul(&ginv)?;
                    neg_exp -= 1;
                }
                for (pe, pc) in neg_pow.terms() {
                    out.add_term(pe, pc * c % self.p);
                }
            }
        }
        Ok(out)
    }

    /// The p-power Frobenius: exponents multiply by p (coefficients are
    /// fixed by x -> x^p on F_p).
    pub fn frobenius(&self) -> LaurentElem {
        let mut out = Self::zero(self.p, self.prec);
        for (e, c) in self.terms() {
            out.add_term(e * self.p as i64, c);
        }
        out
    }
}

/// (1+π)^α for a p-adic exponent α, via the digit product
/// Π_i (1+π^{p^i})^{α_i}; exact at precision because (1+π)^{p^i} = 1+π^{p^i}
/// in characteristic p and factors with p^i >= N are invisible.
pub fn one_plus_pi_pow(alpha: &PadicInt, prec: i64) -> Result<LaurentElem> {
    let p = alpha.p();
    let mut out = LaurentElem::one(p, prec);
    let mut step: i64 = 1; // p^i
    for i in 0..alpha.levels() {
        if step >= prec {
            break;
        }
        let d = alpha.digit(i);
        if d != 0 {
            let base = LaurentElem::from_terms(p, prec, &[(0, 1), (step, 1)]);
            out = out.mul(&base.pow(d)?)?;
        }
        step = step.saturating_mul(p as i64);
    }
    // enough digits to cover the precision window
    if step < prec {
        return Err(Error::Precision(format!(
            "exponent has {} digits, needs coverage up to π^{}",
            alpha.levels(),
            prec
        )));
    }
    Ok(out)
}
