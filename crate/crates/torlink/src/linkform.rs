//! From a symmetric surgery matrix to its torsion linking pairing.
//!
//! `split_free_part` isolates the kernel, `discriminant` computes the Smith
//! normal form of the nonsingular block and transports the pairing
//! `x^T A^-1 y mod Z` onto the Smith-basis generators with invariant factor
//! larger than one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{
    complete_to_unimodular, frac_mod_one, kernel_basis, smith_normal_form, unimodular_inverse,
    IntMatrix, RatMatrix, SmithData,
};
use crate::{Error, Result};

/// Symmetric matrix of rationals in `[0, 1)` representing the linking
/// pairing on a fixed generating set, entrywise in `Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingGram {
    entries: RatMatrix,
}

impl PairingGram {
    pub fn new(entries: RatMatrix) -> Self {
        debug_assert!(entries.is_symmetric());
        PairingGram { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }
}

/// Free rank plus the torsion pairing in a Smith basis.
#[derive(Debug, Clone)]
pub struct DiscriminantPresentation {
    pub b1: usize,
    pub a_red: IntMatrix,
    pub smith: SmithData,
    /// Invariant factors `d_i > 1` in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    /// Pairing Gram on the generators with `d_i > 1`, entries in `[0, 1)`.
    pub gram: PairingGram,
}

impl DiscriminantPresentation {
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

/// Split `A` as `P^T A P = 0_(b1) (+) A_red` with `A_red` nonsingular.
/// The kernel basis columns come first in `P` and are completed to a
/// unimodular matrix.
pub fn split_free_part(a: &IntMatrix) -> Result<(usize, IntMatrix, IntMatrix)> {
    a.require_symmetric()?;
    let k = kernel_basis(a)?;
    let b1 = k.cols();
    let p = complete_to_unimodular(&k)?;
    let b = p.transpose().mul(a).mul(&p);
    let n = a.rows();
    debug_assert!((0..b1).all(|i| (0..n).all(|j| b[(i, j)].is_zero() && b[(j, i)].is_zero())));
    let a_red = b.submatrix(b1, n, b1, n);
    Ok((b1, a_red, p))
}

/// `x^T A_red^-1 y` reduced into `[0, 1)`. Errors with `SingularMatrix`
/// when `det(A_red) = 0`.
pub fn linking_value(a_red: &IntMatrix, x: &[BigInt], y: &[BigInt]) -> Result<BigRational> {
    let n = a_red.rows();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {}/{} against a {n}x{n} matrix",
            x.len(),
            y.len()
        )));
    }
    if n == 0 {
        return Ok(BigRational::zero());
    }
    let inv = a_red.rational_inverse()?;
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let xi = BigRational::from(x[i].clone());
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            acc += &xi * &inv[(i, j)] * BigRational::from(y[j].clone());
        }
    }
    Ok(frac_mod_one(&acc))
}

/// Full discriminant data of a symmetric matrix: free rank, reduced block,
/// Smith normal form, invariant factors greater than one, and the
/// transported Gram matrix on those generators.
pub fn discriminant(a: &IntMatrix) -> Result<DiscriminantPresentation> {
    let (b1, a_red, _p) = split_free_part(a)?;
    let smith = smith_normal_form(&a_red)?;
    let n = a_red.rows();

    let mut keep = Vec::new();
    let mut invariant_factors = Vec::new();
    for i in 0..n {
        let d = &smith.d[(i, i)];
        debug_assert!(d.is_positive(), "reduced block must be nonsingular");
        if *d > BigInt::one() {
            keep.push(i);
            invariant_factors.push(d.clone());
        }
    }

    let gram = if keep.is_empty() {
        PairingGram::new(RatMatrix::zeros(0, 0))
    } else {
        let inv = a_red.rational_inverse()?;
        let u_inv = unimodular_inverse(&smith.u)?.to_rat();
        let full = u_inv.transpose().mul(&inv).mul(&u_inv);
        let entries = RatMatrix::from_fn(keep.len(), keep.len(), |a, b| {
            frac_mod_one(&full[(keep[a], keep[b])])
        });
        PairingGram::new(entries)
    };

    // Order constraint: d_i * gram[i][j] must vanish in Q/Z.
    for (i, d) in invariant_factors.iter().enumerate() {
        for j in 0..invariant_factors.len() {
            let v = BigRational::from(d.clone()) * gram.entry(i, j);
            if !v.is_integer() {
                return Err(Error::NonIntegral(i, j));
            }
        }
    }

    Ok(DiscriminantPresentation {
        b1,
        a_red,
        smith,
        invariant_factors,
        gram,
    })
}
