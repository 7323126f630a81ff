//! Exact linear algebra over F_p and Z/p^k.
//!
//! The streaming rank engine never materializes a matrix: rows are generated
//! on demand and absorbed into a reduced echelon accumulator whose memory is
//! bounded by the column count.

mod echelon;
mod fp;
mod stream;
mod zpk;

pub use echelon::EchelonAccumulator;
pub use fp::FpMatrix;
pub use stream::{rank_streaming, rank_streaming_seq};
pub use zpk::{smith_rank_profile, smith_with_transforms, ZpkMatrix};

#[cfg(feature = "parallel")]
pub use stream::rank_streaming_par;

/// Modular inverse of `a` modulo `m` (extended Euclid). `a` must be a unit.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inv_mod of a non-unit");
    (old_s.rem_euclid(m as i128)) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

pub(crate) fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inv_mod_small() {
        for m in [2u64, 3, 5, 7, 9, 27, 8] {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    assert_eq!(mul_mod(a, inv_mod(a, m), m), 1, "a={a} m={m}");
                }
            }
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
}
