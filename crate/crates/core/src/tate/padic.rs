//! Fixed-precision p-adic integers as base-p digit vectors.
//!
//! A `PadicInt` stores L digits, so it represents a residue in Z/p^L. L is
//! chosen per context: for series actions at precision N the invariant is
//! L >= ceil(log_p N) + 2, which makes exponent arithmetic exact as far as
//! the series can see.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicInt {
    p: u64,
    digits: Vec<u64>,
}

impl PadicInt {
    pub fn zero(p: u64, levels: usize) -> Self {
        PadicInt {
            p,
            digits: vec![0; levels],
        }
    }

    pub fn one(p: u64, levels: usize) -> Self {
        Self::from_u64(p, levels, 1)
    }

    pub fn from_u64(p: u64, levels: usize, mut n: u64) -> Self {
        let mut digits = vec![0; levels];
        for d in digits.iter_mut() {
            *d = n % p;
            n /= p;
        }
        PadicInt { p, digits }
    }

    /// Negative inputs wrap to the p-adic complement.
    pub fn from_i64(p: u64, levels: usize, n: i64) -> Self {
        if n >= 0 {
            Self::from_u64(p, levels, n as u64)
        } else {
            Self::from_u64(p, levels, n.unsigned_abs()).neg()
        }
    }

    pub fn from_digits(p: u64, digits: Vec<u64>) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(Error::Format("digit out of range".into()));
        }
        Ok(PadicInt { p, digits })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn levels(&self) -> usize {
        self.digits.len()
    }

    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.digits.first().is_some_and(|&d| d != 0)
    }

    /// p-adic valuation; None when zero at this precision.
    pub fn val(&self) -> Option<u32> {
        self.digits.iter().position(|&d| d != 0).map(|i| i as u32)
    }

    pub fn add(&self, other: &PadicInt) -> PadicInt {
        let mut out = Vec::with_capacity(self.levels());
        let mut carry = 0u64;
        for i in 0..self.levels() {
            let s = self.digit(i) + other.digit(i) + carry;
            out.push(s % self.p);
            carry = s / self.p;
        }
        PadicInt {
            p: self.p,
            digits: out,
        }
    }

    pub fn neg(&self) -> PadicInt {
        let mut out = vec![0; self.levels()];
        let mut borrow = 0u64;
        for i in 0..self.levels() {
            let d = self.digit(i) + borrow;
            if d == 0 {
                out[i] = 0;
            } else {
                out[i] = self.p - d;
                borrow = 1;
            }
        }
        PadicInt {
            p: self.p,
            digits: out,
        }
    }

    pub fn sub(&self, other: &PadicInt) -> PadicInt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicInt) -> PadicInt {
        let l = self.levels();
        let mut acc = vec![0u64; l];
        for i in 0..l {
            if self.digit(i) == 0 {
                continue;
            }
            let mut carry = 0u64;
            for j in 0..l - i {
                let s = acc[i + j] + self.digit(i) * other.digit(j) + carry;
                acc[i + j] = s % self.p;
                carry = s / self.p;
            }
        }
        PadicInt {
            p: self.p,
            digits: acc,
        }
    }

    pub fn mul_u64(&self, k: u64) -> PadicInt {
        self.mul(&PadicInt::from_u64(self.p, self.levels(), k))
    }

    /// Inverse of a unit, digit by digit.
    pub fn inverse(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::Precondition("p-adic inverse of a non-unit".into()));
        }
        let p = self.p;
        let inv0 = crate::linalg::inv_mod(self.digit(0), p);
        let mut x = PadicInt::from_u64(p, self.levels(), inv0);
        // Newton: x <- x(2 - ax), doubling correct digits each round
        let two = PadicInt::from_u64(p, self.levels(), 2);
        let mut correct = 1usize;
        while correct < self.levels() {
            let ax = self.mul(&x);
            x = x.mul(&two.sub(&ax));
            correct *= 2;
        }
        Ok(x)
    }

    /// Exact quotient by p^k (requires divisibility at this precision; the
    /// top k digits of the result are unknowable and set to 0).
    pub fn shift_down(&self, k: usize) -> Result<PadicInt> {
        if self.digits[..k.min(self.levels())].iter().any(|&d| d != 0) {
            return Err(Error::Precondition("not divisible by p^k".into()));
        }
        let mut digits: Vec<u64> = self.digits[k.min(self.levels())..].to_vec();
        digits.resize(self.levels(), 0);
        Ok(PadicInt { p: self.p, digits })
    }

    /// The residue mod p^k as a u64 (requires p^k to fit).
    pub fn residue(&self, k: usize) -> u64 {
        let mut out: u64 = 0;
        for i in (0..k.min(self.levels())).rev() {
            out = out * self.p + self.digit(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn roundtrip_small_values() {
        for p in [2u64, 3, 5] {
            for n in 0..50u64 {
                let x = PadicInt::from_u64(p, 8, n);
                assert_eq!(x.residue(8), n);
            }
        }
    }

    #[test]
    fn negation_is_additive_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5] {
            for _ in 0..50 {
                let x = PadicInt::from_u64(p, 10, rng.gen_range(0..100000));
                assert!(x.add(&x.neg()).is_zero());
            }
        }
    }

    #[test]
    fn arithmetic_matches_integers_mod_p_l() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for p in [2u64, 3] {
            let l = 10usize;
            let modulus = p.pow(l as u32);
            for _ in 0..100 {
                let a = rng.gen_range(0..modulus);
                let b = rng.gen_range(0..modulus);
                let x = PadicInt::from_u64(p, l, a);
                let y = PadicInt::from_u64(p, l, b);
                assert_eq!(x.add(&y).residue(l), (a + b) % modulus);
                assert_eq!(
                    x.mul(&y).residue(l),
                    ((a as u128 * b as u128) % modulus as u128) as u64
                );
            }
        }
    }

    #[test]
    fn unit_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in [2u64, 3, 5] {
            for _ in 0..50 {
                let mut n = rng.gen_range(1..10000u64);
                if n % p == 0 {
                    n += 1;
                }
                let x = PadicInt::from_u64(p, 9, n);
                let inv = x.inverse().unwrap();
                assert_eq!(x.mul(&inv).residue(9), 1);
            }
        }
    }

    #[test]
    fn from_i64_wraps_negatives() {
        let x = PadicInt::from_i64(3, 6, -1);
        assert_eq!(x.add(&PadicInt::one(3, 6)).residue(6), 0);
        assert_eq!(x.digit(0), 2);
    }

    #[test]
    fn valuation_and_shift() {
        let x = PadicInt::from_u64(3, 8, 27 * 5);
        assert_eq!(x.val(), Some(3));
        assert_eq!(x.shift_down(3).unwrap().residue(3), 5);
        assert!(x.shift_down(4).is_err());
    }
}
