//! Quadratic-refinement Gauss sums over the 2-primary part, evaluated
//! exactly in `Z[zeta_{2^m}]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclotomic::{match_eighth_root, CycInt};
use crate::exact::{frac_mod_one, RatMatrix};
use crate::{Error, Result};

/// The 2-primary pairing on generators `g_i` of order `2^(e_i)`:
/// `gram[i][j] = lambda(g_i, g_j)` in `[0, 1)` with denominator a power
/// of two dividing `2^min(e_i, e_j)`.
#[derive(Debug, Clone)]
pub struct TwoAdicGram {
    pub exponents: Vec<u32>,
    pub gram: RatMatrix,
}

impl TwoAdicGram {
    pub fn max_exponent(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }
}

/// Coset representatives of `H_k = G_(2) / G_(2)[2^k]` as coefficient
/// vectors on the 2-primary generators: coefficient `i` ranges over
/// `0 .. 2^(e_i - k)` when `e_i > k` and is pinned to zero otherwise.
pub struct QuotientReps {
    ranges: Vec<u64>,
    current: Vec<u64>,
    done: bool,
}

impl Iterator for QuotientReps {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = 0;
        loop {
            if i == self.ranges.len() {
                self.done = true;
                break;
            }
            self.current[i] += 1;
            if self.current[i] < self.ranges[i] {
                break;
            }
            self.current[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Size of `H_k` for the given generator exponents, saturating at
/// `u128::MAX` so oversized groups always trip the cap check.
pub fn quotient_size(exponents: &[u32], k: u32) -> u128 {
    let mut size = 1u128;
    for &e in exponents {
        if e > k {
            let bits = e - k;
            if bits >= 127 {
                return u128::MAX;
            }
            size = size.saturating_mul(1u128 << bits);
        }
    }
    size
}

/// Enumerate `H_k`; errors with `CapExceeded` when `|H_k|` is larger than
/// the configured cap. Enumeration is additionally refused outright when
/// any single coefficient range would not fit in a machine word.
pub fn enumerate_quotient_h(exponents: &[u32], k: u32, cap: u128) -> Result<QuotientReps> {
    let size = quotient_size(exponents, k);
    if size > cap || exponents.iter().any(|&e| e > k && e - k >= 63) {
        return Err(Error::CapExceeded { size, cap });
    }
    let ranges: Vec<u64> = exponents
        .iter()
        .map(|&e| if e > k { 1u64 << (e - k) } else { 1 })
        .collect();
    Ok(QuotientReps {
        current: vec![0; ranges.len()],
        ranges,
        done: false,
    })
}

/// The exact Gauss sum `sum_(z in H_k) exp(2 pi i q_k(z))` with
/// `q_k(z) = 2^(k-1) lambda(z, z)`, returned together with `|H_k|`.
/// Well-defined whenever the layer-k type E condition holds.
pub fn gauss_sum(g: &TwoAdicGram, k: u32, cap: u128) -> Result<(CycInt, u128)> {
    assert!(k >= 1);
    let size = quotient_size(&g.exponents, k);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let m = 3.max(g.max_exponent() + 1);
    let mut sum = CycInt::zero(m);
    let scale = BigRational::from(BigInt::from(1u64) << (k - 1));
    for rep in enumerate_quotient_h(&g.exponents, k, cap)? {
        let mut lam = BigRational::zero();
        for (i, &ci) in rep.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let cb = BigRational::from(BigInt::from(ci));
            for (j, &cj) in rep.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                lam += &cb * BigRational::from(BigInt::from(cj)) * &g.gram[(i, j)];
            }
        }
        let q = frac_mod_one(&(lam * &scale));
        sum = sum.add(&root_of_unity(m, &q)?);
    }
    Ok((sum, size))
}

/// The Z/8-valued phase of the normalized Gauss sum at layer `k` of a
/// 2-primary pairing: the unique `u` with
/// `sum = sqrt(|H_k|) * zeta8^u`. `NoMatch` signals a violated type E
/// precondition or corrupt pairing data upstream.
pub fn gauss_u(g: &TwoAdicGram, k: u32, cap: u128) -> Result<u8> {
    let (sum, size) = gauss_sum(g, k, cap)?;
    match_eighth_root(&sum, size)
}

/// `exp(2 pi i q)` where `q` in `[0, 1)` must have 2-power denominator
/// dividing `2^m`.
fn root_of_unity(m: u32, q: &BigRational) -> Result<CycInt> {
    debug_assert!(!q.is_negative());
    let denom = q.denom();
    let num = q.numer();
    let bits = denom.bits();
    // power of two check: 2^(bits-1) == denom
    if (BigInt::from(1) << (bits - 1)) != *denom || bits - 1 > m as u64 {
        return Err(Error::NonIntegral(0, 0));
    }
    let shift = m as u64 - (bits - 1);
    let j = (num << shift)
        .to_u64()
        .ok_or(Error::NonIntegral(0, 0))?;
    Ok(CycInt::root(m, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn gram_from(entries: &[&[(i64, i64)]]) -> RatMatrix {
        let n = entries.len();
        RatMatrix::from_fn(n, n, |i, j| {
            let (num, den) = entries[i][j];
            frac_mod_one(&rat(num, den))
        })
    }

    #[test]
    fn quotient_sizes() {
        assert_eq!(quotient_size(&[1, 1], 1), 1);
        assert_eq!(quotient_size(&[3], 2), 2);
        assert_eq!(quotient_size(&[], 1), 1);
        assert_eq!(quotient_size(&[4, 2, 1], 1), 8 * 2);
    }

    #[test]
    fn quotient_enumeration_counts_and_ranges() {
        let reps: Vec<_> = enumerate_quotient_h(&[3, 1], 2, 1 << 20).unwrap().collect();
        assert_eq!(reps.len(), 2);
        assert!(reps.contains(&vec![0, 0]) && reps.contains(&vec![1, 0]));
        let reps: Vec<_> = enumerate_quotient_h(&[2, 2], 1, 1 << 20).unwrap().collect();
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn quotient_cap() {
        assert!(matches!(
            enumerate_quotient_h(&[40], 1, 1 << 20),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn hyperbolic_block_has_trivial_phase() {
        // (Z/2)^2 with the hyperbolic pairing: H_1 is trivial, u = 0.
        let g = TwoAdicGram {
            exponents: vec![1, 1],
            gram: gram_from(&[&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]]),
        };
        assert_eq!(gauss_u(&g, 1, 1 << 20).unwrap(), 0);
    }

    #[test]
    fn quarter_self_linking_phase() {
        // <1/4> at k = 1: sum over H_1 = Z/2 is 1 + i = sqrt(2) zeta8.
        let g = TwoAdicGram {
            exponents: vec![2],
            gram: gram_from(&[&[(1, 4)]]),
        };
        assert_eq!(gauss_u(&g, 1, 1 << 20).unwrap(), 1);
        // <3/4>: 1 - i.
        let g = TwoAdicGram {
            exponents: vec![2],
            gram: gram_from(&[&[(3, 4)]]),
        };
        assert_eq!(gauss_u(&g, 1, 1 << 20).unwrap(), 7);
        // k = 2: H_2 trivial.
        assert_eq!(gauss_u(&g, 2, 1 << 20).unwrap(), 0);
    }

    #[test]
    fn hyperbolic_deep_block_all_layers_vanish() {
        // E(8) on (Z/8)^2: phase 0 at every layer.
        for k in 1..=4 {
            let g = TwoAdicGram {
                exponents: vec![3, 3],
                gram: gram_from(&[&[(0, 1), (1, 8)], &[(1, 8), (0, 1)]]),
            };
            assert_eq!(gauss_u(&g, k, 1 << 20).unwrap(), 0, "k = {k}");
        }
    }

    #[test]
    fn modulus_equals_quotient_size() {
        // S * conj(S) = |H_k| for a sample of inputs satisfying the gate.
        let samples: Vec<TwoAdicGram> = vec![
            TwoAdicGram {
                exponents: vec![2, 2],
                gram: gram_from(&[&[(1, 4), (0, 1)], &[(0, 1), (3, 4)]]),
            },
            TwoAdicGram {
                exponents: vec![3],
                gram: gram_from(&[&[(5, 8)]]),
            },
        ];
        for g in &samples {
            for k in 1..=3 {
                let (s, n) = gauss_sum(g, k, 1 << 20).unwrap();
                let norm = s.mul(&s.conj());
                assert_eq!(
                    norm,
                    crate::cyclotomic::CycInt::from_int(s.conductor_exponent(), BigInt::from(n as i64))
                );
            }
        }
    }
}
