//! Exact arithmetic in `Z[zeta_{2^m}]` for 2-power Gauss sums.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(2^(m-1)-1)`
//! with the single rewrite `zeta^(2^(m-1)) = -1`; for 2-power conductors the
//! cyclotomic polynomial is exactly `x^(2^(m-1)) + 1`, so no deeper reduction
//! is needed and the coefficient vector is a unique representation.
//! Mixed conductors are unified by the squaring embedding
//! `zeta_{2^m} = zeta_{2^(m+1)}^2`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

use crate::{Error, Result};

/// An element of `Z[zeta_{2^m}]`, `m >= 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycInt {
    m: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    fn half(m: u32) -> usize {
        1usize << (m - 1)
    }

    pub fn zero(m: u32) -> Self {
        assert!(m >= 1, "conductor exponent must be at least 1");
        CycInt {
            m,
            coeffs: vec![BigInt::zero(); Self::half(m)],
        }
    }

    pub fn from_int(m: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = v.into();
        z
    }

    /// `zeta_{2^m}^j`, reduced to the canonical basis.
    pub fn root(m: u32, j: u64) -> Self {
        let order = 1u64 << m;
        assert!(j < order, "exponent out of range");
        let half = Self::half(m) as u64;
        let mut z = Self::zero(m);
        if j < half {
            z.coeffs[j as usize] = BigInt::one();
        } else {
            z.coeffs[(j - half) as usize] = -BigInt::one();
        }
        z
    }

    pub fn conductor_exponent(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-express in `Z[zeta_{2^m2}]` for `m2 >= m` (index scaling).
    pub fn embed(&self, m2: u32) -> Self {
        assert!(m2 >= self.m);
        if m2 == self.m {
            return self.clone();
        }
        let f = 1usize << (m2 - self.m);
        let mut out = Self::zero(m2);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs[i * f] = c.clone();
            }
        }
        out
    }

    fn unified(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.m.max(b.m);
        (a.embed(m), b.embed(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::unified(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -(&*c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unified(self, other);
        let half = Self::half(a.m);
        let mut out = Self::zero(a.m);
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x * y;
                let idx = i + j;
                if idx < half {
                    out.coeffs[idx] += prod;
                } else {
                    out.coeffs[idx - half] -= prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= k;
        }
        out
    }

    /// Complex conjugation `zeta -> zeta^(-1)`.
    pub fn conj(&self) -> Self {
        let order = 1u64 << self.m;
        let mut out = Self::zero(self.m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = if i == 0 { 0 } else { order - i as u64 };
            out = out.add(&Self::root(self.m, j).scale(c));
        }
        out
    }

    /// `sqrt(N)` for `N = 2^t` as an exact element: an integer for even `t`,
    /// and `2^((t-1)/2) (zeta8 + zeta8^-1)` for odd `t`. Conductor at least 3.
    pub fn sqrt_pow2(m: u32, t: u32) -> Self {
        assert!(m >= 3);
        if t % 2 == 0 {
            Self::from_int(m, BigInt::one() << (t / 2))
        } else {
            let zeta8 = Self::root(m, 1u64 << (m - 3));
            let sqrt2 = zeta8.add(&zeta8.conj());
            sqrt2.scale(&(BigInt::one() << ((t - 1) / 2)))
        }
    }

    /// `zeta8^u` at conductor `m >= 3`.
    pub fn eighth_root(m: u32, u: u8) -> Self {
        assert!(m >= 3);
        Self::root(m, (u as u64 % 8) << (m - 3))
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("{c}*z^{i}"));
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "CycInt(2^{}): {}", self.m, terms.join(" + "))
    }
}

/// Find the unique `u` with `s = sqrt(N) * zeta8^u` for `N = 2^t`, or
/// `NoMatch` when `s` is not of that form.
pub fn match_eighth_root(s: &CycInt, n: u128) -> Result<u8> {
    assert!(n.is_power_of_two(), "N must be a power of two");
    let t = n.trailing_zeros();
    let m = s.conductor_exponent().max(3);
    let s = s.embed(m);
    let sqrt_n = CycInt::sqrt_pow2(m, t);
    for u in 0..8u8 {
        let cand = sqrt_n.mul(&CycInt::eighth_root(m, u));
        if cand == s {
            return Ok(u);
        }
    }
    Err(Error::NoMatch(n))
}
