//! Legendre symbols, primality and small factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion with
/// fast modular exponentiation. Returns -1, 0 or +1.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    let pb = BigInt::from(p);
    let mut r = a.mod_floor(&pb);
    if r.is_zero() {
        return Ok(0);
    }
    let exp = BigInt::from((p - 1) / 2);
    r = r.modpow(&exp, &pb);
    if r.is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for all n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization of a positive u64 as sorted `(prime, exponent)`
/// pairs. Trial division plus Pollard rho for the stubborn cofactors.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut stack = vec![n];
    while let Some(mut m) = stack.pop() {
        if m <= 1 {
            continue;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            while m % p == 0 {
                push_factor(&mut out, p);
                m /= p;
            }
        }
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push_factor(&mut out, m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64) {
    if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
        e.1 += 1;
    } else {
        out.push((p, 1));
    }
}

fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = (mul_mod(x, x, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization of a positive BigInt that fits in u64.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if !n.is_positive() {
        return Err(Error::InvalidInput(format!("cannot factor {n}")));
    }
    match n.to_u64() {
        Some(v) => Ok(factor_u64(v)),
        None => Err(Error::FactorTooLarge(n.to_string())),
    }
}
