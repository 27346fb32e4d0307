//! Integer kernels and unimodular completion.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix};
use crate::{Error, Result};

/// Z-basis of `ker(A) (cap) Z^n`, returned as the columns of an `n x r`
/// matrix. The basis is saturated: the quotient `Z^n / ker` is torsion-free,
/// which holds automatically because the kernel of an integer matrix is a
/// saturated subgroup.
pub fn kernel_basis(a: &IntMatrix) -> Result<IntMatrix> {
    let snf = smith_normal_form(a)?;
    let k = a.rows().min(a.cols());
    let mut idx = Vec::new();
    for j in 0..a.cols() {
        if j >= k || snf.d[(j, j)].is_zero() {
            idx.push(j);
        }
    }
    Ok(snf.v.select_columns(&idx))
}

/// Complete the columns of `K` to a unimodular matrix `P` whose first
/// `K.cols()` columns equal `K`. Errors with `NotSaturated` when the columns
/// do not form a saturated independent set (so no completion over Z exists).
pub fn complete_to_unimodular(k: &IntMatrix) -> Result<IntMatrix> {
    let n = k.rows();
    let r = k.cols();
    if r > n {
        return Err(Error::NotSaturated);
    }
    if r == 0 {
        return Ok(IntMatrix::identity(n));
    }
    let snf = smith_normal_form(k)?;
    // Saturated independent set <=> every invariant factor is 1.
    for i in 0..r {
        if !snf.d[(i, i)].is_one() {
            return Err(Error::NotSaturated);
        }
    }
    // K = U^-1 (I_r; 0) V^-1, so U^-1 * blockdiag(V^-1, I) has K as its
    // leading columns and is unimodular.
    let u_inv = unimodular_inverse(&snf.u)?;
    let v_inv = unimodular_inverse(&snf.v)?;
    let mut w = IntMatrix::identity(n);
    for i in 0..r {
        for j in 0..r {
            w[(i, j)] = v_inv[(i, j)].clone();
        }
    }
    let p = u_inv.mul(&w);
    debug_assert_eq!(p.submatrix(0, n, 0, r), *k);
    debug_assert_eq!(p.det()?.abs(), BigInt::one());
    Ok(p)
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let inv = m.rational_inverse()?;
    inv.to_int().ok_or(Error::InvalidInput(
        "matrix is not unimodular: inverse is not integral".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        let a = IntMatrix::zeros(2, 2);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 2);
        assert_eq!(k.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn kernel_trivial() {
        let a = IntMatrix::from_rows(&[vec![1]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_rank_one() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 1);
        // A * K = 0 and the vector is primitive (+-(1,-1)).
        let prod = a.mul(&k);
        assert!(prod.entries().iter().all(Zero::is_zero));
        let g = num_integer::gcd(k[(0, 0)].clone(), k[(1, 0)].clone());
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn completion_identity_case() {
        let k = IntMatrix::from_rows(&[vec![1], vec![0]]);
        let p = complete_to_unimodular(&k).unwrap();
        assert_eq!(p, IntMatrix::identity(2));
    }

    #[test]
    fn completion_of_primitive_vector() {
        let k = IntMatrix::from_rows(&[vec![1], vec![-1]]);
        let p = complete_to_unimodular(&k).unwrap();
        assert_eq!(p[(0, 0)], BigInt::from(1));
        assert_eq!(p[(1, 0)], BigInt::from(-1));
        assert_eq!(p.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn completion_rejects_imprimitive() {
        let k = IntMatrix::from_rows(&[vec![2], vec![0]]);
        assert_eq!(complete_to_unimodular(&k).unwrap_err(), Error::NotSaturated);
    }

    #[test]
    fn kernel_then_completion_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![2, -2, 4], vec![1, -1, 2], vec![3, -3, 6]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 2);
        let prod = a.mul(&k);
        assert!(prod.entries().iter().all(Zero::is_zero));
        let p = complete_to_unimodular(&k).unwrap();
        assert_eq!(p.det().unwrap().abs(), BigInt::one());
    }
}
