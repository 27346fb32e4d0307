//! Smith normal form with transformation matrices.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{IntMatrix, DEFAULT_MAX_ENTRY_BITS};
use crate::{Error, Result};

/// Smith normal form data: unimodular `U`, `V` and diagonal `D` with
/// `U * A * V = D`, nonnegative diagonal, and `d_i | d_{i+1}` among the
/// nonzero entries. Nonzero invariant factors come first, zeros last.
#[derive(Debug, Clone)]
pub struct SmithData {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithData {
    /// Diagonal entries `d_0, ..., d_{min(m,n)-1}`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Compute the Smith normal form of an arbitrary integer matrix.
///
/// Pivot selection takes the entry of least absolute value in the remaining
/// block, breaking ties by the entry's position in the *original* matrix.
/// The positional tie-break keeps the elimination path of `A (+) (+-1)`
/// aligned with that of `A`, so downstream pairing data is stable under
/// stabilization.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithData> {
    smith_normal_form_with_cap(a, DEFAULT_MAX_ENTRY_BITS)
}

pub fn smith_normal_form_with_cap(a: &IntMatrix, max_bits: u64) -> Result<SmithData> {
    let m = a.rows();
    let n = a.cols();
    let mut mat = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut orig_row: Vec<usize> = (0..m).collect();
    let mut orig_col: Vec<usize> = (0..n).collect();

    for t in 0..m.min(n) {
        loop {
            let pivot = find_pivot(&mat, t, &orig_row, &orig_col);
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return Ok(SmithData { u, d: mat, v }),
            };
            swap_rows(&mut mat, &mut u, &mut orig_row, t, pi);
            swap_cols(&mut mat, &mut v, &mut orig_col, t, pj);

            if mat.max_entry_bits() > max_bits {
                return Err(Error::BitCapExceeded(max_bits));
            }

            let mut dirty = false;
            for i in t + 1..m {
                if mat[(i, t)].is_zero() {
                    continue;
                }
                let q = &mat[(i, t)] / &mat[(t, t)];
                if !q.is_zero() {
                    row_sub(&mut mat, &mut u, i, t, &q);
                }
                if !mat[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..n {
                if mat[(t, j)].is_zero() {
                    continue;
                }
                let q = &mat[(t, j)] / &mat[(t, t)];
                if !q.is_zero() {
                    col_sub(&mut mat, &mut v, j, t, &q);
                }
                if !mat[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Make the pivot divide the rest of the block.
            if let Some(i) = find_nondivisible_row(&mat, t) {
                row_add(&mut mat, &mut u, t, i);
                continue;
            }
            break;
        }
        if mat[(t, t)].is_negative() {
            negate_row(&mut mat, &mut u, t);
        }
    }
    Ok(SmithData { u, d: mat, v })
}

fn find_pivot(
    mat: &IntMatrix,
    t: usize,
    orig_row: &[usize],
    orig_col: &[usize],
) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize, usize, usize)> = None;
    for i in t..mat.rows() {
        for j in t..mat.cols() {
            let e = &mat[(i, j)];
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            let key = (a, orig_row[i], orig_col[j]);
            match &best {
                Some((ba, br, bc, _, _))
                    if (ba, *br, *bc) <= (&key.0, key.1, key.2) => {}
                _ => best = Some((key.0, key.1, key.2, i, j)),
            }
        }
    }
    best.map(|(_, _, _, i, j)| (i, j))
}

fn find_nondivisible_row(mat: &IntMatrix, t: usize) -> Option<usize> {
    let d = &mat[(t, t)];
    for i in t + 1..mat.rows() {
        for j in t + 1..mat.cols() {
            if !(&mat[(i, j)] % d).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn swap_rows(mat: &mut IntMatrix, u: &mut IntMatrix, orig: &mut [usize], a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..mat.cols() {
        let x = mat[(a, j)].clone();
        mat[(a, j)] = mat[(b, j)].clone();
        mat[(b, j)] = x;
    }
    for j in 0..u.cols() {
        let x = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = x;
    }
    orig.swap(a, b);
}

fn swap_cols(mat: &mut IntMatrix, v: &mut IntMatrix, orig: &mut [usize], a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..mat.rows() {
        let x = mat[(i, a)].clone();
        mat[(i, a)] = mat[(i, b)].clone();
        mat[(i, b)] = x;
    }
    for i in 0..v.rows() {
        let x = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = x;
    }
    orig.swap(a, b);
}

/// row_i -= q * row_t, applied to the working matrix and to U.
fn row_sub(mat: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..mat.cols() {
        let upd = &mat[(i, j)] - q * &mat[(t, j)];
        mat[(i, j)] = upd;
    }
    for j in 0..u.cols() {
        let upd = &u[(i, j)] - q * &u[(t, j)];
        u[(i, j)] = upd;
    }
}

/// col_j -= q * col_t, applied to the working matrix and to V.
fn col_sub(mat: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..mat.rows() {
        let upd = &mat[(i, j)] - q * &mat[(i, t)];
        mat[(i, j)] = upd;
    }
    for i in 0..v.rows() {
        let upd = &v[(i, j)] - q * &v[(i, t)];
        v[(i, j)] = upd;
    }
}

/// row_t += row_i.
fn row_add(mat: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    for j in 0..mat.cols() {
        let upd = &mat[(t, j)] + &mat[(i, j)];
        mat[(t, j)] = upd;
    }
    for j in 0..u.cols() {
        let upd = &u[(t, j)] + &u[(i, j)];
        u[(t, j)] = upd;
    }
}

fn negate_row(mat: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..mat.cols() {
        let upd = -mat[(t, j)].clone();
        mat[(t, j)] = upd;
    }
    for j in 0..u.cols() {
        let upd = -u[(t, j)].clone();
        u[(t, j)] = upd;
    }
}
