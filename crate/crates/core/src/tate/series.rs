//! Truncated Tate algebra R = F{t_1..t_d}: finitely many monomials of total
//! degree <= D with Laurent coefficients at precision N. The Gauss valuation
//! is the minimum coefficient valuation over monomials.

use super::laurent::{LaurentElem, Val};
use super::TateParams;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateElem {
    params: TateParams,
    /// t-exponent vector (length d, total degree <= deg_cap) -> coefficient
    terms: BTreeMap<Vec<u32>, LaurentElem>,
}

impl TateElem {
    pub fn zero(params: &TateParams) -> Self {
        TateElem {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: &TateParams) -> Self {
        Self::from_laurent(params, LaurentElem::one(params.p, params.prec))
    }

    /// Constant term (degree-0 monomial) with the given coefficient.
    pub fn from_laurent(params: &TateParams, c: LaurentElem) -> Self {
        let mut out = Self::zero(params);
        out.add_monomial(&vec![0; params.d], &c);
        out
    }

    pub fn monomial(params: &TateParams, exps: &[u32], c: LaurentElem) -> Result<Self> {
        if exps.len() != params.d {
            return Err(Error::Dimension(format!(
                "monomial has {} exponents, algebra has {} variables",
                exps.len(),
                params.d
            )));
        }
        let mut out = Self::zero(params);
        out.add_monomial(&exps.to_vec(), &c);
        Ok(out)
    }

    pub fn params(&self) -> &TateParams {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &LaurentElem)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> LaurentElem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| LaurentElem::zero(self.params.p, self.params.prec))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Gauss valuation in π-units.
    pub fn val(&self) -> Val {
        let mut best: Option<i64> = None;
        for c in self.terms.values() {
            if let Val::Exact(v) = c.val() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        match best {
            Some(v) => Val::Exact(v),
            None => Val::AtLeast(self.params.prec),
        }
    }

    fn add_monomial(&mut self, exps: &Vec<u32>, c: &LaurentElem) {
        if c.is_zero() || exps.iter().map(|&e| e as u64).sum::<u64>() > self.params.deg_cap as u64 {
            return; // degree truncation, same semantics as π-precision
        }
        let entry = self
            .terms
            .entry(exps.clone())
            .or_insert_with(|| LaurentElem::zero(self.params.p, self.params.prec));
        *entry = entry.add(c).expect("matching parameters");
        if entry.is_zero() {
            self.terms.remove(exps);
        }
    }

    fn check_params(&self, other: &TateElem) -> Result<()> {
        if self.params != other.params {
            return Err(Error::Precondition(format!(
                "Tate parameter mismatch: {:?} vs {:?}",
                self.params, other.params
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TateElem) -> Result<TateElem> {
        self.check_params(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_monomial(e, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> TateElem {
        let mut out = Self::zero(&self.params);
        for (e, c) in self.terms() {
            out.add_monomial(e, &c.neg());
        }
        out
    }

    pub fn sub(&self, other: &TateElem) -> Result<TateElem> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentElem) -> Result<TateElem> {
        let mut out = Self::zero(&self.params);
        for (e, coef) in self.terms() {
            out.add_monomial(e, &coef.mul(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &TateElem) -> Result<TateElem> {
        self.check_params(other)?;
        let mut out = Self::zero(&self.params);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(&a, &b)| a + b).collect();
                out.add_monomial(&exps, &c1.mul(c2)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<TateElem> {
        let mut base = self.clone();
        let mut out = Self::one(&self.params);
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

    /// The substitution π -> pi_img, t_j -> t_units[j] · t_j, which covers
    /// every group action in scope (t variables are only ever rescaled by
    /// units of F).
    pub fn substitute_action(
        &self,
        pi_img: &LaurentElem,
        t_units: &[LaurentElem],
    ) -> Result<TateElem> {
        if t_units.len() != self.params.d {
            return Err(Error::Dimension(format!(
                "need {} unit images, got {}",
                self.params.d,
                t_units.len()
            )));
        }
        let mut out = Self::zero(&self.params);
        for (e, c) in self.terms() {
            let mut coef = c.substitute(pi_img)?;
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    coef = coef.mul(&t_units[j].pow(k as u64)?)?;
                }
            }
            out.add_monomial(e, &coef);
        }
        Ok(out)
    }

    /// p-power Frobenius: all exponents multiply by p. Fails loudly if a
    /// t-degree would leave the truncation window.
    pub fn frobenius(&self) -> Result<TateElem> {
        let p = self.params.p as u32;
        let mut out = Self::zero(&self.params);
        for (e, c) in self.terms() {
            let exps: Vec<u32> = e.iter().map(|&a| a * p).collect();
            if exps.iter().map(|&x| x as u64).sum::<u64>() > self.params.deg_cap as u64 {
                return Err(Error::Truncation(format!(
                    "frobenius pushes t-degree past cap {}",
                    self.params.deg_cap
                )));
            }
            out.add_monomial(&exps, &c.frobenius());
        }
        Ok(out)
    }
}

/// Random sparse element with coefficient exponents in [min_exp, prec);
/// used by sampled identity checks and solvers throughout the crate.
pub fn random_elem(rng: &mut impl rand::Rng, params: &TateParams, min_exp: i64) -> TateElem {
    let mut out = TateElem::zero(params);
    for _ in 0..rng.gen_range(1..6) {
        let mut exps = vec![0u32; params.d];
        let mut budget = params.deg_cap as u32;
        for e in exps.iter_mut() {
            *e = rng.gen_range(0..=budget.min(3));
            budget -= *e;
        }
        let c = LaurentElem::from_terms(
            params.p,
            params.prec,
            &[(
                rng.gen_range(min_exp..params.prec),
                rng.gen_range(1..params.p),
            )],
        );
        out.add_monomial(&exps, &c);
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;

    pub(crate) use super::random_elem as random_tate;

    fn params(p: u64, d: usize) -> TateParams {
        TateParams {
            p,
            d,
            prec: 24,
            deg_cap: 6,
        }
    }

    #[test]
    fn gauss_valuation_is_min_over_monomials() {
        let pr = params(3, 2);
        let a = TateElem::monomial(&pr, &[1, 0], LaurentElem::monomial(3, 24, 2, 1)).unwrap();
        let b = TateElem::monomial(&pr, &[0, 2], LaurentElem::monomial(3, 24, -1, 2)).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.val(), Val::Exact(-1));
    }

    #[test]
    fn mul_is_commutative_and_valuation_additive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let pr = params(3, 2);
        for _ in 0..50 {
            let x = random_tate(&mut rng, &pr, 0);
            let y = random_tate(&mut rng, &pr, 0);
            let xy = x.mul(&y).unwrap();
            assert_eq!(xy, y.mul(&x).unwrap());
        }
    }

    #[test]
    fn substitute_action_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        let pr = params(2, 1);
        for _ in 0..20 {
            let x = random_tate(&mut rng, &pr, -3);
            let pi = LaurentElem::pi(2, 24);
            let one = LaurentElem::one(2, 24);
            assert_eq!(x.substitute_action(&pi, &[one]).unwrap(), x);
        }
    }

    #[test]
    fn substitute_action_is_multiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let pr = params(3, 1);
        let pi_img = LaurentElem::from_terms(3, 24, &[(1, 1), (9, 1), (10, 1)]);
        let unit = LaurentElem::from_terms(3, 24, &[(0, 1), (3, 1)]);
        for _ in 0..30 {
            let x = random_tate(&mut rng, &pr, 0);
            let y = random_tate(&mut rng, &pr, 0);
            // keep degrees inside the cap so nothing truncates
            let total: u64 = x
                .terms()
                .chain(y.terms())
                .map(|(e, _)| e.iter().map(|&a| a as u64).sum::<u64>())
                .max()
                .unwrap_or(0);
            if 2 * total > pr.deg_cap as u64 {
                continue;
            }
            let lhs = x
                .mul(&y)
                .unwrap()
                .substitute_action(&pi_img, std::slice::from_ref(&unit))
                .unwrap();
            let rhs = x
                .substitute_action(&pi_img, std::slice::from_ref(&unit))
                .unwrap()
                .mul(
                    &y.substitute_action(&pi_img, std::slice::from_ref(&unit))
                        .unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_overflow_is_loud() {
        let pr = params(2, 1);
        let x = TateElem::monomial(&pr, &[4], LaurentElem::one(2, 24)).unwrap();
        assert!(matches!(x.frobenius(), Err(Error::Truncation(_))));
    }
}
