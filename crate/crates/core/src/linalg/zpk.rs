use super::{add_mod, inv_mod, mul_mod, neg_mod};
use crate::error::{Error, Result};

/// Dense matrix over Z/p^k, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpkMatrix {
    p: u64,
    k: u32,
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// Smith-form data over Z/p^k: `a = u_inv * diag * v_inv` with `u`, `v`
/// invertible, i.e. `diag = u * a * v`. Diagonal entries are powers of p
/// (p^k meaning zero), with nondecreasing exponents.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub exponents: Vec<u32>,
    pub u: ZpkMatrix,
    pub v: ZpkMatrix,
}

impl ZpkMatrix {
    pub fn new(p: u64, k: u32, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        let modulus = p.pow(k);
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(ZpkMatrix {
            p,
            k,
            modulus,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(p: u64, k: u32, rows: usize, cols: usize) -> Self {
        Self::new(p, k, rows, cols, vec![0; rows * cols]).expect("consistent")
    }

    pub fn identity(p: u64, k: u32, n: usize) -> Self {
        let mut m = Self::zero(p, k, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
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
        self.entries[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &ZpkMatrix) -> Result<ZpkMatrix> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::Dimension("zpk multiply shape mismatch".into()));
        }
        let m = self.modulus;
        let mut out = ZpkMatrix::zero(self.p, self.k, self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = add_mod(out.get(r, c), mul_mod(a, other.get(t, c), m), m);
                    out.entries[r * other.cols + c] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length mismatch".into()));
        }
        let m = self.modulus;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, m), m))
            })
            .collect())
    }

    pub fn sub(&self, other: &ZpkMatrix) -> Result<ZpkMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.modulus != other.modulus {
            return Err(Error::Dimension("zpk sub shape mismatch".into()));
        }
        let m = self.modulus;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, neg_mod(b, m), m))
            .collect();
        ZpkMatrix::new(self.p, self.k, self.rows, self.cols, entries)
    }

    /// Inverse of a square matrix that is invertible mod p.
    pub fn inverse(&self) -> Result<ZpkMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let m = self.modulus;
        let p = self.p;
        let mut aug: Vec<Vec<u64>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| (c == r) as u64));
                row
            })
            .collect();
        for col in 0..n {
            // a unit pivot always exists when the matrix is invertible mod p
            let pivot_row = (col..n)
                .find(|&r| aug[r][col] % p != 0)
                .ok_or_else(|| Error::Dimension("matrix not invertible mod p".into()))?;
            aug.swap(col, pivot_row);
            let inv = inv_mod(aug[col][col], m);
            for c in 0..2 * n {
                aug[col][c] = mul_mod(aug[col][c], inv, m);
            }
            for r in 0..n {
                if r != col && aug[r][col] != 0 {
                    let f = neg_mod(aug[r][col], m);
                    for c in 0..2 * n {
                        aug[r][c] = add_mod(aug[r][c], mul_mod(f, aug[col][c], m), m);
                    }
                }
            }
        }
        let entries = aug.iter().flat_map(|r| r[n..].iter().copied()).collect();
        ZpkMatrix::new(p, self.k, n, n, entries)
    }

    /// Generators of { x : m x = 0 } together with their additive orders
    /// (as powers of p). Spans the kernel as an abelian group.
    pub fn kernel_generators(&self) -> Vec<(Vec<u64>, u32)> {
        let sf = smith_with_transforms(self);
        let mut gens = Vec::new();
        let diag = sf.exponents.len();
        for (i, &e) in sf.exponents.iter().enumerate() {
            if e == 0 {
                continue; // unit diagonal entry, no kernel contribution
            }
            // z = p^{k-e} e_i, x = v z
            let coeff = self.p.pow(self.k - e);
            let x: Vec<u64> = (0..self.cols)
                .map(|r| mul_mod(sf.v.get(r, i), coeff, self.modulus))
                .collect();
            gens.push((x, e));
        }
        for j in diag..self.cols {
            let x: Vec<u64> = (0..self.cols).map(|r| sf.v.get(r, j)).collect();
            gens.push((x, self.k));
        }
        gens
    }

    /// Solve m x = b over Z/p^k, or None if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("rhs length mismatch".into()));
        }
        let sf = smith_with_transforms(self);
        let ub = sf.u.mul_vec(b)?;
        let diag = sf.exponents.len();
        let mut z = vec![0u64; self.cols];
        for (i, &ubi) in ub.iter().enumerate() {
            if i < diag {
                let e = sf.exponents[i];
                let pe = self.p.pow(e);
                if ubi % pe != 0 {
                    return Ok(None);
                }
                z[i] = ubi / pe;
            } else if ubi != 0 {
                return Ok(None);
            }
        }
        Ok(Some(sf.v.mul_vec(&z)?))
    }
}

fn val_p(mut x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(k)
}

/// Smith form over Z/p^k with the row/column transforms recorded.
pub fn smith_with_transforms(a: &ZpkMatrix) -> SmithForm {
    let (p, k, m) = (a.p, a.k, a.modulus);
    let (rows, cols) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = ZpkMatrix::identity(p, k, rows);
    let mut v = ZpkMatrix::identity(p, k, cols);
    let diag = rows.min(cols);
    let mut exponents = Vec::with_capacity(diag);

    for t in 0..diag {
        // pick the remaining entry of minimal p-valuation
        let mut best = (k, t, t);
        for r in t..rows {
            for c in t..cols {
                let val = val_p(s.get(r, c), p, k);
                if val < best.0 {
                    best = (val, r, c);
                }
            }
        }
        let (e, br, bc) = best;
        exponents.push(e);
        if e == k {
            exponents.resize(diag, k);
            break;
        }
        swap_rows(&mut s, t, br);
        swap_rows(&mut u, t, br);
        swap_cols(&mut s, t, bc);
        swap_cols(&mut v, t, bc);
        // normalize pivot to p^e
        let pe = p.pow(e);
        let unit = s.get(t, t) / pe;
        let unit_inv = inv_mod(unit, m);
        scale_row(&mut s, t, unit_inv);
        scale_row(&mut u, t, unit_inv);
        // clear the rest of column t and row t; every remaining entry is
        // divisible by p^e because e was minimal
        for r in 0..rows {
            if r != t && s.get(r, t) != 0 {
                let f = neg_mod(s.get(r, t) / pe, m);
                add_row_multiple(&mut s, r, t, f);
                add_row_multiple(&mut u, r, t, f);
            }
        }
        for c in 0..cols {
            if c != t && s.get(t, c) != 0 {
                let f = neg_mod(s.get(t, c) / pe, m);
                add_col_multiple(&mut s, c, t, f);
                add_col_multiple(&mut v, c, t, f);
            }
        }
    }
    if exponents.len() < diag {
        exponents.resize(diag, k);
    }
    SmithForm { exponents, u, v }
}

/// Multiset of elementary divisor exponents of m over Z/p^k (sorted).
pub fn smith_rank_profile(m: &ZpkMatrix) -> Vec<u32> {
    smith_with_transforms(m).exponents
}

fn swap_rows(m: &mut ZpkMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        let (x, y) = (m.get(a, c), m.get(b, c));
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut ZpkMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows {
        let (x, y) = (m.get(r, a), m.get(r, b));
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

fn scale_row(m: &mut ZpkMatrix, r: usize, f: u64) {
    let md = m.modulus;
    for c in 0..m.cols {
        let v = mul_mod(m.get(r, c), f, md);
        m.set(r, c, v);
    }
}

/// row_dst += f * row_src
fn add_row_multiple(m: &mut ZpkMatrix, dst: usize, src: usize, f: u64) {
    let md = m.modulus;
    for c in 0..m.cols {
        let v = add_mod(m.get(dst, c), mul_mod(f, m.get(src, c), md), md);
        m.set(dst, c, v);
    }
}

/// col_dst += f * col_src
fn add_col_multiple(m: &mut ZpkMatrix, dst: usize, src: usize, f: u64) {
    let md = m.modulus;
    for r in 0..m.rows {
        let v = add_mod(m.get(r, dst), mul_mod(f, m.get(r, src), md), md);
        m.set(r, dst, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_profile_is_zero() {
        let m = ZpkMatrix::identity(2, 2, 3);
        assert_eq!(smith_rank_profile(&m), vec![0, 0, 0]);
    }

    #[test]
    fn diag_two_over_z4() {
        let m = ZpkMatrix::new(2, 2, 1, 1, vec![2]).unwrap();
        assert_eq!(smith_rank_profile(&m), vec![1]);
    }

    /// Integer Smith form oracle for small matrices (elementary divisors
    /// over Z via fraction-free elimination), reduced mod p^k.
    fn integer_smith_exponents(entries: &[i64], n: usize, p: u64, k: u32) -> Vec<u32> {
        // gcd-based Smith over Z, adequate for 4x4
        let mut a: Vec<Vec<i64>> = (0..n)
            .map(|r| entries[r * n..(r + 1) * n].to_vec())
            .collect();
        let mut exps = Vec::new();
        for t in 0..n {
            loop {
                // find min abs nonzero
                let mut best: Option<(usize, usize)> = None;
                for r in t..n {
                    for c in t..n {
                        if a[r][c] != 0
                            && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs())
                        {
                            best = Some((r, c));
                        }
                    }
                }
                let Some((br, bc)) = best else {
                    exps.push(k); // zero block
                    break;
                };
                a.swap(t, br);
                for row in a.iter_mut() {
                    row.swap(t, bc);
                }
                let piv = a[t][t];
                let mut clean = true;
                for r in t + 1..n {
                    let q = a[r][t].div_euclid(piv);
                    if q != 0 {
                        for c in t..n {
                            a[r][c] -= q * a[t][c];
                        }
                    }
                    if a[r][t] != 0 {
                        clean = false;
                    }
                }
                for c in t + 1..n {
                    let q = a[t][c].div_euclid(piv);
                    if q != 0 {
                        for r in t..n {
                            a[r][c] -= q * a[r][t];
                        }
                    }
                    if a[t][c] != 0 {
                        clean = false;
                    }
                }
                if clean {
                    let mut v = 0u32;
                    let mut x = piv.unsigned_abs();
                    while x % p == 0 && v < k {
                        x /= p;
                        v += 1;
                    }
                    exps.push(v.min(k));
                    break;
                }
            }
        }
        exps.sort_unstable();
        exps
    }

    #[test]
    fn random_profiles_match_integer_smith_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let entries_i: Vec<i64> = (0..16).map(|_| rng.gen_range(0..8)).collect();
            let entries_u: Vec<u64> = entries_i.iter().map(|&x| x as u64).collect();
            let m = ZpkMatrix::new(2, 3, 4, 4, entries_u).unwrap();
            let mut got = smith_rank_profile(&m);
            got.sort_unstable();
            let want = integer_smith_exponents(&entries_i, 4, 2, 3);
            assert_eq!(got, want, "matrix {entries_i:?}");
        }
    }

    #[test]
    fn smith_transforms_reconstruct() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..27)).collect();
            let a = ZpkMatrix::new(3, 3, rows, cols, entries).unwrap();
            let sf = smith_with_transforms(&a);
            let uav = sf.u.mul(&a).unwrap().mul(&sf.v).unwrap();
            // check u a v is the expected diagonal
            for r in 0..rows {
                for c in 0..cols {
                    let want = if r == c && r < sf.exponents.len() && sf.exponents[r] < 3 {
                        3u64.pow(sf.exponents[r])
                    } else {
                        0
                    };
                    assert_eq!(uav.get(r, c), want);
                }
            }
            // transforms invertible
            sf.u.inverse().unwrap();
            sf.v.inverse().unwrap();
        }
    }

    #[test]
    fn kernel_and_solve() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..9)).collect();
            let a = ZpkMatrix::new(3, 2, rows, cols, entries).unwrap();
            for (g, ord) in a.kernel_generators() {
                assert!(a.mul_vec(&g).unwrap().iter().all(|&x| x == 0));
                // generator really has the claimed order: p^{ord-1} g != 0
                if ord > 0 {
                    let scaled: Vec<u64> = g.iter().map(|&x| (x * 3u64.pow(ord - 1)) % 9).collect();
                    assert!(scaled.iter().any(|&x| x != 0), "order too large");
                }
            }
            // consistent systems solve
            let x0: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..9)).collect();
            let b = a.mul_vec(&x0).unwrap();
            let x = a.solve(&b).unwrap().expect("consistent");
            assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }
}
