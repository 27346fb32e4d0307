//! Exact 2-power Gauss sums in Z[zeta_{2^m}].
//!
//! The Gauss invariant of an even 2-primary layer is the phase of
//! sum exp(2 pi i q_k(z)) over H_k, matched exactly against the eight
//! candidates sqrt(|H_k|) zeta8^u. Everything is integer arithmetic in the
//! cyclotomic ring; no floating point appears anywhere.
//!
//! ```bash
//! cargo run --example gauss_sums
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use torlink::canon::{gauss_sum, gauss_u, TwoAdicGram};
use torlink::cyclotomic::{match_eighth_root, CycInt};
use torlink::exact::RatMatrix;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    // sqrt(2) as an exact ring element.
    let zeta8 = CycInt::root(3, 1);
    let sqrt2 = zeta8.add(&zeta8.conj());
    println!("(zeta8 + zeta8^-1)^2 = {:?}", sqrt2.mul(&sqrt2));

    // 1 + i = sqrt(2) zeta8.
    let s = CycInt::from_int(3, 1).add(&CycInt::root(3, 2));
    println!("1 + i matches u = {}", match_eighth_root(&s, 2).unwrap());

    // The quadratic refinement of the hyperbolic pairing on (Z/2)^2 sums
    // to 1 over the trivial quotient H_1: phase 0.
    let hyp = TwoAdicGram {
        exponents: vec![1, 1],
        gram: RatMatrix::from_fn(2, 2, |i, j| if i == j { rat(0, 1) } else { rat(1, 2) }),
    };
    println!("hyperbolic(2) layer 1: u = {}", gauss_u(&hyp, 1, 1 << 20).unwrap());

    // <1/8> seen from each layer: the phases walk through the odd classes.
    let cyclic8 = TwoAdicGram {
        exponents: vec![3],
        gram: RatMatrix::from_fn(1, 1, |_, _| rat(1, 8)),
    };
    for k in 1..=3 {
        let (s, n) = gauss_sum(&cyclic8, k, 1 << 20).unwrap();
        let norm = s.mul(&s.conj());
        println!(
            "<1/8> at k = {k}: |H_k| = {n}, S * conj(S) = {:?}, u = {}",
            norm,
            match_eighth_root(&s, n).unwrap()
        );
    }

    // Four copies of <1/4> produce the phase 4 that the second even
    // generator F(2) absorbs during assembly.
    let four = TwoAdicGram {
        exponents: vec![2; 4],
        gram: RatMatrix::from_fn(4, 4, |i, j| if i == j { rat(1, 4) } else { rat(0, 1) }),
    };
    println!("<1/4>^4 at k = 1: u = {}", gauss_u(&four, 1, 1 << 20).unwrap());
}
