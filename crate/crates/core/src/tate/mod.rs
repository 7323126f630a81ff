//! Exact truncated models of the Tate-algebra coefficient rings: fixed-
//! precision p-adic exponents, Laurent series in π at absolute precision N,
//! the Tate algebra F{t_1..t_d} truncated at total degree D, and the label
//! decomposition of φ⁻¹(R)/R.

pub mod frac;
pub mod laurent;
pub mod padic;
pub mod series;

pub use frac::{decompose, recompose, rep_params, to_rep, FracElem};
pub use laurent::{one_plus_pi_pow, LaurentElem, Val};
pub use padic::PadicInt;
pub use series::{random_elem, TateElem};

/// Shared parameters of a truncated Tate algebra over F = F_p((π)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateParams {
    /// the prime
    pub p: u64,
    /// number of t-variables
    pub d: usize,
    /// absolute π-adic precision N: exponents < N are tracked exactly
    pub prec: i64,
    /// total t-degree cap D: higher monomials are truncated away
    pub deg_cap: usize,
}

impl TateParams {
    pub fn new(p: u64, d: usize) -> Self {
        TateParams {
            p,
            d,
            prec: 64,
            deg_cap: 8,
        }
    }

    /// Digit count that makes p-adic exponent arithmetic exact as far as the
    /// series precision can see.
    pub fn exponent_levels(&self) -> usize {
        let mut l = 0usize;
        let mut pw = 1i64;
        while pw < self.prec {
            pw = pw.saturating_mul(self.p as i64);
            l += 1;
        }
        l + 2
    }
}
