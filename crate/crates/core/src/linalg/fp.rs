use super::{add_mod, inv_mod, mul_mod, neg_mod, EchelonAccumulator};
use crate::error::{Error, Result};

/// Dense matrix over the prime field F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn new(p: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Stack matrices vertically.
    pub fn vstack(blocks: &[FpMatrix]) -> Result<Self> {
        let p = blocks[0].p;
        let cols = blocks[0].cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols || b.p != p {
                return Err(Error::Dimension("vstack shape mismatch".into()));
            }
            entries.extend_from_slice(&b.entries);
            rows += b.rows;
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Concatenate matrices horizontally.
    pub fn hstack(blocks: &[FpMatrix]) -> Result<Self> {
        let p = blocks[0].p;
        let rows = blocks[0].rows;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        for b in blocks {
            if b.rows != rows || b.p != p {
                return Err(Error::Dimension("hstack shape mismatch".into()));
            }
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                entries.extend_from_slice(b.row(r));
            }
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = FpMatrix::zero(p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let t = add_mod(out.get(r, c), mul_mod(a, other.get(k, c), p), p);
                    out.entries[r * other.cols + c] = t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length mismatch".into()));
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, p), p))
            })
            .collect())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.p != other.p {
            return Err(Error::Dimension("add shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, b, self.p))
            .collect();
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.p != other.p {
            return Err(Error::Dimension("sub shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, neg_mod(b, self.p), self.p))
            .collect();
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn pow(&self, mut e: u64) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("pow of non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Rank by dense elimination through the accumulator.
    pub fn rank(&self) -> usize {
        let mut acc = EchelonAccumulator::new_generic(self.p, self.cols);
        for r in 0..self.rows {
            acc.absorb_row(self.row(r)).expect("consistent dims");
        }
        acc.rank()
    }

    /// Basis of the right kernel { x : m x = 0 }.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut acc = EchelonAccumulator::new_generic(p, self.cols);
        for r in 0..self.rows {
            acc.absorb_row(self.row(r)).expect("consistent dims");
        }
        let basis = acc.basis_rows();
        let pivots = acc.pivots().to_vec();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (i, &pv) in pivots.iter().enumerate() {
                // pivot coordinate chosen so the row equations vanish
                v[pv] = neg_mod(basis[i][free], p);
            }
            out.push(v);
        }
        out
    }

    /// Solve m x = b, or None if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "rhs length {} != rows {}",
                b.len(),
                self.rows
            )));
        }
        let p = self.p;
        // eliminate on [m | b] rows
        let mut acc = EchelonAccumulator::new_generic(p, self.cols + 1);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r] % p);
            acc.absorb_row(&row).expect("consistent dims");
        }
        let basis = acc.basis_rows();
        let pivots = acc.pivots();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the augmented column
        }
        let mut x = vec![0u64; self.cols];
        for (i, &pv) in pivots.iter().enumerate() {
            x[pv] = basis[i][self.cols];
        }
        Ok(Some(x))
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let p = self.p;
        let mut aug: Vec<Vec<u64>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| (c == r) as u64));
                row
            })
            .collect();
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| aug[r][col] != 0)
                .ok_or_else(|| Error::Dimension("matrix is singular".into()))?;
            aug.swap(col, pivot_row);
            let inv = inv_mod(aug[col][col], p);
            for c in 0..2 * n {
                aug[col][c] = mul_mod(aug[col][c], inv, p);
            }
            for r in 0..n {
                if r != col && aug[r][col] != 0 {
                    let f = neg_mod(aug[r][col], p);
                    for c in 0..2 * n {
                        aug[r][c] = add_mod(aug[r][c], mul_mod(f, aug[col][c], p), p);
                    }
                }
            }
        }
        let entries = aug.iter().flat_map(|r| r[n..].iter().copied()).collect();
        FpMatrix::new(p, n, n, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = FpMatrix::identity(5, 3);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_full() {
        let m = FpMatrix::zero(3, 2, 4);
        assert_eq!(m.kernel_basis().len(), 4);
    }

    #[test]
    fn kernel_dim_one_example() {
        // [[1,2],[2,1]] over F_3: second row = 2 * first row, kernel dim 1,
        // spanned by (1,1) since 1+2 = 0 mod 3.
        let m = FpMatrix::new(3, 2, 2, vec![1, 2, 2, 1]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(m.mul_vec(&k[0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn solve_identity() {
        let m = FpMatrix::identity(7, 4);
        let b = vec![1, 5, 0, 3];
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_zero_inconsistent() {
        let m = FpMatrix::zero(5, 3, 2);
        assert!(m.solve(&[1, 0, 0]).unwrap().is_none());
    }

    #[test]
    fn solve_random_consistent_system() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let entries: Vec<u64> = (0..60).map(|_| rng.gen_range(0..2)).collect();
            let m = FpMatrix::new(2, 10, 6, entries).unwrap();
            let x0: Vec<u64> = (0..6).map(|_| rng.gen_range(0..2)).collect();
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn rank_plus_kernel_equals_cols() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for &p in &[2u64, 3, 5] {
            for _ in 0..10 {
                let rows = rng.gen_range(1..15);
                let cols = rng.gen_range(1..15);
                let entries = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
                let m = FpMatrix::new(p, rows, cols, entries).unwrap();
                assert_eq!(m.rank() + m.kernel_basis().len(), cols);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::new(3, 2, 2, vec![1, 1, 1, 2]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(3, 2));
    }
}
