use super::{add_mod, inv_mod, mul_mod, neg_mod};
use crate::error::{Error, Result};

/// Reduced echelon basis accumulated one row at a time.
///
/// Memory is bounded by `cols` * rank, independent of how many rows are
/// absorbed. For p = 2 rows are bit-packed into 64-bit words; the generic
/// residue representation is used for odd p. Since the reduced echelon basis
/// of a row space is unique, the accumulated basis does not depend on the
/// order in which rows arrive, which makes parallel partitioning safe.
#[derive(Debug, Clone)]
pub struct EchelonAccumulator {
    p: u64,
    cols: usize,
    repr: Repr,
}

#[derive(Debug, Clone)]
enum Repr {
    /// Bit-packed rows, sorted by pivot column; pivots[i] is the pivot of rows[i].
    Gf2 {
        rows: Vec<Vec<u64>>,
        pivots: Vec<usize>,
    },
    Generic {
        rows: Vec<Vec<u64>>,
        pivots: Vec<usize>,
    },
}

impl EchelonAccumulator {
    pub fn new(p: u64, cols: usize) -> Self {
        let repr = if p == 2 {
            Repr::Gf2 {
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        } else {
            Repr::Generic {
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        };
        EchelonAccumulator { p, cols, repr }
    }

    /// Force the generic residue representation even at p = 2 (used to
    /// cross-check the bit-packed path).
    pub fn new_generic(p: u64, cols: usize) -> Self {
        EchelonAccumulator {
            p,
            cols,
            repr: Repr::Generic {
                rows: Vec::new(),
                pivots: Vec::new(),
            },
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        match &self.repr {
            Repr::Gf2 { pivots, .. } | Repr::Generic { pivots, .. } => pivots.len(),
        }
    }

    pub fn pivots(&self) -> &[usize] {
        match &self.repr {
            Repr::Gf2 { pivots, .. } | Repr::Generic { pivots, .. } => pivots,
        }
    }

    /// Absorb a row of residues. Returns true iff the rank increased.
    pub fn absorb_row(&mut self, row: &[u64]) -> Result<bool> {
        if row.len() != self.cols {
            return Err(Error::Dimension(format!(
                "row length {} != accumulator cols {}",
                row.len(),
                self.cols
            )));
        }
        match &mut self.repr {
            Repr::Gf2 { .. } => {
                let packed = pack_bits(row);
                self.absorb_packed(packed)
            }
            Repr::Generic { .. } => self.absorb_generic(row.to_vec()),
        }
    }

    /// Absorb a bit-packed row (p = 2 only). Length must be ceil(cols/64) words.
    pub fn absorb_packed(&mut self, mut row: Vec<u64>) -> Result<bool> {
        let cols = self.cols;
        let words = cols.div_ceil(64);
        let Repr::Gf2 { rows, pivots } = &mut self.repr else {
            return Err(Error::Unsupported("packed rows require p = 2".into()));
        };
        if row.len() != words {
            return Err(Error::Dimension(format!(
                "packed row has {} words, expected {}",
                row.len(),
                words
            )));
        }
        // reduce by existing basis
        for (i, &pv) in pivots.iter().enumerate() {
            if get_bit(&row, pv) {
                xor_into(&mut row, &rows[i]);
            }
        }
        let Some(pivot) = first_set_bit(&row, cols) else {
            return Ok(false);
        };
        // back-reduce existing rows
        for r in rows.iter_mut() {
            if get_bit(r, pivot) {
                let tmp = row.clone();
                xor_into(r, &tmp);
            }
        }
        let pos = pivots.partition_point(|&q| q < pivot);
        pivots.insert(pos, pivot);
        rows.insert(pos, row);
        Ok(true)
    }

    fn absorb_generic(&mut self, mut row: Vec<u64>) -> Result<bool> {
        let p = self.p;
        let Repr::Generic { rows, pivots } = &mut self.repr else {
            unreachable!()
        };
        for (i, &pv) in pivots.iter().enumerate() {
            let c = row[pv];
            if c != 0 {
                let factor = neg_mod(c, p);
                axpy(&mut row, factor, &rows[i], p);
            }
        }
        let Some(pivot) = row.iter().position(|&c| c != 0) else {
            return Ok(false);
        };
        // normalize pivot to 1
        let inv = inv_mod(row[pivot], p);
        for c in row.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
        for r in rows.iter_mut() {
            let c = r[pivot];
            if c != 0 {
                let factor = neg_mod(c, p);
                axpy(r, factor, &row, p);
            }
        }
        let pos = pivots.partition_point(|&q| q < pivot);
        pivots.insert(pos, pivot);
        rows.insert(pos, row);
        Ok(true)
    }

    /// Absorb every basis row of another accumulator (used to merge
    /// per-worker partial results; the merged reduced basis is canonical).
    pub fn merge(&mut self, other: &EchelonAccumulator) -> Result<()> {
        match &other.repr {
            Repr::Gf2 { rows, .. } => {
                for r in rows {
                    self.absorb_packed(r.clone())?;
                }
            }
            Repr::Generic { rows, .. } => {
                for r in rows {
                    self.absorb_row(r)?;
                }
            }
        }
        Ok(())
    }

    /// Basis rows as residue vectors (unpacked for p = 2).
    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        match &self.repr {
            Repr::Gf2 { rows, .. } => rows.iter().map(|r| unpack_bits(r, self.cols)).collect(),
            Repr::Generic { rows, .. } => rows.clone(),
        }
    }

    /// Reduce a vector modulo the accumulated row space; returns the residue.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        match &self.repr {
            Repr::Gf2 { rows, pivots } => {
                let mut packed = pack_bits(v);
                for (i, &pv) in pivots.iter().enumerate() {
                    if get_bit(&packed, pv) {
                        xor_into(&mut packed, &rows[i]);
                    }
                }
                unpack_bits(&packed, self.cols)
            }
            Repr::Generic { rows, pivots } => {
                let mut row = v.to_vec();
                for (i, &pv) in pivots.iter().enumerate() {
                    let c = row[pv];
                    if c != 0 {
                        axpy(&mut row, neg_mod(c, self.p), &rows[i], self.p);
                    }
                }
                row
            }
        }
    }
}

fn axpy(dst: &mut [u64], factor: u64, src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = add_mod(*d, mul_mod(factor, s, p), p);
    }
}

pub(crate) fn pack_bits(row: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; row.len().div_ceil(64)];
    for (i, &c) in row.iter().enumerate() {
        if c & 1 == 1 {
            out[i / 64] |= 1u64 << (i % 64);
        }
    }
    out
}

pub(crate) fn unpack_bits(packed: &[u64], cols: usize) -> Vec<u64> {
    (0..cols).map(|i| get_bit(packed, i) as u64).collect()
}

#[inline]
fn get_bit(packed: &[u64], i: usize) -> bool {
    packed[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_set_bit(packed: &[u64], cols: usize) -> Option<usize> {
    for (w, &word) in packed.iter().enumerate() {
        if word != 0 {
            let bit = w * 64 + word.trailing_zeros() as usize;
            return (bit < cols).then_some(bit);
        }
    }
    None
}
