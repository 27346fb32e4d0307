//! Exact integer and rational linear algebra.
//!
//! Everything downstream (linking forms, layer invariants, realization)
//! reduces to the routines here: fraction-free determinants, Smith normal
//! form with transformation matrices, exact rational inversion, signatures
//! by rational congruence, saturated kernels and unimodular completion.
//! All values are immutable after construction and every operation is a
//! pure function.

mod kernel;
mod legendre;
mod snf;

pub use kernel::{complete_to_unimodular, kernel_basis, unimodular_inverse};
pub use legendre::{factor_bigint, factor_u64, is_prime_u64, legendre};
pub use snf::{smith_normal_form, smith_normal_form_with_cap, SmithData};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Default cap on entry bit growth inside elimination loops.
pub const DEFAULT_MAX_ENTRY_BITS: u64 = 1_000_000;

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from i64 rows. Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// First index pair witnessing asymmetry, if any.
    pub fn symmetry_defect(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.symmetry_defect().is_none()
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match self.symmetry_defect() {
            Some((i, j)) => Err(Error::NotSymmetric(i, j)),
            None => Ok(()),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = -(&*e);
        }
        out
    }

    /// Block-diagonal sum of the given matrices (all square).
    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = IntMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        out
    }

    /// Contiguous submatrix with row range `r0..r1`, column range `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        IntMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Columns at the given indices, in order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect(),
        }
    }

    pub fn max_entry_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        self.det_with_cap(DEFAULT_MAX_ENTRY_BITS)
    }

    pub fn det_with_cap(&self, max_bits: u64) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let pivot = (k + 1..n).find(|&i| !m[(i, k)].is_zero());
                match pivot {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    let q = num / &prev;
                    if q.bits() > max_bits {
                        return Err(Error::BitCapExceeded(max_bits));
                    }
                    m[(i, j)] = q;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Exact inverse over the rationals. Errors on singular input and
    /// checks `A * A^-1 = I` before returning.
    pub fn rational_inverse(&self) -> Result<RatMatrix> {
        let inv = self.to_rat().inverse()?;
        let prod = self.to_rat().mul(&inv);
        debug_assert!(prod.is_identity(), "inverse check failed");
        Ok(inv)
    }

    /// Signature of a symmetric matrix over the reals, computed exactly by
    /// rational symmetric congruence. When every remaining diagonal entry
    /// vanishes but the block is nonzero, a hyperbolic step contributes
    /// (1, 1) to (b+, b-).
    pub fn signature(&self) -> Result<Signature> {
        self.require_symmetric()?;
        let n = self.rows;
        let mut s = self.to_rat();
        let mut active: Vec<usize> = (0..n).collect();
        let mut b_plus = 0usize;
        let mut b_minus = 0usize;
        while !active.is_empty() {
            // Diagonal pivot if available.
            if let Some(pos) = active.iter().position(|&i| !s[(i, i)].is_zero()) {
                let p = active.remove(pos);
                let d = s[(p, p)].clone();
                if d.is_positive() {
                    b_plus += 1;
                } else {
                    b_minus += 1;
                }
                // Row p stays intact until every remaining row is cleared.
                let factors: Vec<(usize, BigRational)> = active
                    .iter()
                    .map(|&i| (i, &s[(i, p)] / &d))
                    .collect();
                for (i, f) in &factors {
                    if f.is_zero() {
                        continue;
                    }
                    for &j in &active {
                        let upd = &s[(*i, j)] - f * &s[(p, j)];
                        s[(*i, j)] = upd;
                    }
                }
                continue;
            }
            // All active diagonals vanish: look for a hyperbolic pair.
            let mut pair = None;
            'outer: for (a, &i) in active.iter().enumerate() {
                for &j in &active[a + 1..] {
                    if !s[(i, j)].is_zero() {
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match pair {
                Some((i, j)) => {
                    // e_i += e_j turns the 2x2 zero-diagonal block into one
                    // with s[i][i] = 2 s[i][j] != 0; the block contributes
                    // exactly (1, 1) over the next two diagonal pivots.
                    let two = BigRational::from(BigInt::from(2));
                    let sii = &s[(i, i)] + &two * &s[(i, j)] + &s[(j, j)];
                    s[(i, i)] = sii;
                    for &k in &active {
                        if k == i {
                            continue;
                        }
                        let v = &s[(i, k)] + &s[(j, k)];
                        s[(i, k)] = v.clone();
                        s[(k, i)] = v;
                    }
                }
                None => {
                    // Remaining block is identically zero.
                    break;
                }
            }
        }
        let b_zero = n - b_plus - b_minus;
        Ok(Signature {
            b_plus,
            b_minus,
            b_zero,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dense matrix of exact rationals in lowest terms.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i == j {
                    if !self[(i, j)].is_one() {
                        return false;
                    }
                } else if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `SingularMatrix` if no inverse exists.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return Err(Error::SingularMatrix),
            };
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let d = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &d;
                inv[(col, j)] = &inv[(col, j)] / &d;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let av = &a[(i, j)] - &f * &a[(col, j)];
                    a[(i, j)] = av;
                    let iv = &inv[(i, j)] - &f * &inv[(col, j)];
                    inv[(i, j)] = iv;
                }
            }
        }
        Ok(inv)
    }

    /// Numerator matrix if all entries are integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().map(|x| x.to_integer()).collect(),
            })
        } else {
            None
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Inertia of a real symmetric matrix: positive, negative and zero
/// eigenvalue counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

/// Reduce a rational into `[0, 1)`.
pub fn frac_mod_one(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < BigRational::one());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn det_golden_values() {
        assert_eq!(m(&[vec![0, 3], vec![3, 0]]).det().unwrap(), BigInt::from(-9));
        assert_eq!(m(&[vec![1]]).det().unwrap(), BigInt::from(1));
        assert_eq!(m(&[vec![0, 2], vec![2, 0]]).det().unwrap(), BigInt::from(-4));
    }

    #[test]
    fn det_zero_and_larger() {
        assert_eq!(m(&[vec![1, 1], vec![1, 1]]).det().unwrap(), BigInt::zero());
        let a = m(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]);
        assert_eq!(a.det().unwrap(), BigInt::from(4));
    }

    #[test]
    fn rational_inverse_golden() {
        let a = m(&[vec![0, 2], vec![2, 0]]);
        let inv = a.rational_inverse().unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(inv[(0, 1)], half);
        assert_eq!(inv[(1, 0)], half);
        assert!(inv[(0, 0)].is_zero());

        let b = m(&[vec![2, 1], vec![1, 2]]);
        let binv = b.rational_inverse().unwrap();
        assert_eq!(binv[(0, 0)], BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert_eq!(binv[(0, 1)], BigRational::new(BigInt::from(-1), BigInt::from(3)));
        assert!(binv.is_symmetric());
    }

    #[test]
    fn rational_inverse_singular() {
        let a = m(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(a.rational_inverse().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn signature_examples() {
        let s = m(&[vec![2, 0], vec![0, 2]]).signature().unwrap();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (2, 0, 0));
        let s = m(&[vec![0, 2], vec![2, 0]]).signature().unwrap();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (1, 1, 0));
        let s = m(&[vec![0, 0], vec![0, 0]]).signature().unwrap();
        assert_eq!((s.b_plus, s.b_minus, s.b_zero), (0, 0, 2));
    }

    #[test]
    fn signature_rejects_asymmetric() {
        let a = m(&[vec![0, 1], vec![2, 0]]);
        assert!(matches!(a.signature(), Err(Error::NotSymmetric(0, 1))));
    }

    #[test]
    fn signature_sylvester_invariance() {
        // P^T A P has the same inertia for unimodular P.
        let a = m(&[vec![3, 1, 0], vec![1, -2, 2], vec![0, 2, 0]]);
        let p = m(&[vec![1, 2, 0], vec![0, 1, -3], vec![1, 0, 1]]);
        assert_eq!(p.det().unwrap(), BigInt::from(-5)); // invertible over Q, still a congruence
        let b = p.transpose().mul(&a).mul(&p);
        let sa = a.signature().unwrap();
        let sb = b.signature().unwrap();
        assert_eq!((sa.b_plus, sa.b_minus), (sb.b_plus, sb.b_minus));
    }
}
