//! Canonical choice of the 2-primary determinant refinements.
//!
//! The raw determinant class of a layer restriction depends on the Smith
//! basis when other 2-layers are nearby: a generator of order `2^k` in a
//! (possibly non-orthogonal) decomposition can absorb an element `w` of a
//! layer `j`, which shifts the layer determinant by a unit factor
//! `1 + rho * 2^k lambda(w, w)` of 2-adic valuation `|k - j|`, plus one
//! when layer `j` is even (its self-linkings carry an extra factor of 2).
//! Layers at distance three or more cannot change the class, since units
//! congruent to 1 mod 8 are squares. Reducing each slot modulo the unit
//! subgroup determined by its nearest nonempty neighbors therefore yields
//! a vector that depends only on the isometry class, and the canonical
//! block model built from it reproduces the vector on re-extraction.

use num_rational::BigRational;

use super::gauss::TwoAdicGram;
use crate::exact::{frac_mod_one, RatMatrix};
use num_bigint::BigInt;

/// Raw per-layer data for the prime 2, in ascending `k` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayerRaw {
    pub k: u32,
    pub n: usize,
    pub type_a: bool,
    /// Raw determinant class: `Some` iff `type_a && k >= 2`.
    pub raw_delta: Option<u8>,
}

/// 2-adic valuation of the smallest unit shift reachable on layer `k`
/// from the other nonempty layers; 3 means no shift is reachable.
fn ambiguity_valuation(layers: &[TwoLayerRaw], k: u32) -> u32 {
    layers
        .iter()
        .filter(|l| l.k != k)
        .map(|l| k.abs_diff(l.k) + u32::from(!l.type_a))
        .min()
        .unwrap_or(3)
        .min(3)
}

/// Reduce each raw determinant class modulo the reachable unit subgroup
/// and return the least representative.
pub fn canonical_deltas(layers: &[TwoLayerRaw]) -> Vec<Option<u8>> {
    layers
        .iter()
        .map(|l| {
            let delta = l.raw_delta?;
            let d = ambiguity_valuation(layers, l.k);
            let canonical = match (l.k, d) {
                // Odd-valuation units act: every class collapses.
                (_, 0 | 1) => 1,
                // Units 1 mod 4 act: multiplication by 5 identifies
                // delta with 5*delta mod 8 (no effect mod 4).
                (2, 2) => delta,
                (_, 2) => match delta {
                    5 => 1,
                    7 => 3,
                    other => other,
                },
                _ => delta,
            };
            Some(canonical)
        })
        .collect()
}

/// The canonical 2-primary block model for the given layer data: type A
/// layers become diagonal cyclic blocks `<1/2^k>^(n-1) + <delta/2^k>`,
/// type E layers become hyperbolic blocks.
pub fn canonical_model(layers: &[TwoLayerRaw], deltas: &[Option<u8>]) -> TwoAdicGram {
    let mut exponents = Vec::new();
    let mut blocks: Vec<(usize, usize, BigRational)> = Vec::new(); // (i, j, value)
    for (layer, delta) in layers.iter().zip(deltas) {
        let start = exponents.len();
        let denom = BigInt::from(1u64) << layer.k;
        if layer.type_a {
            for idx in 0..layer.n {
                let numer = if idx + 1 == layer.n {
                    BigInt::from(delta.unwrap_or(1))
                } else {
                    BigInt::from(1)
                };
                let i = start + idx;
                blocks.push((i, i, BigRational::new(numer, denom.clone())));
                exponents.push(layer.k);
            }
        } else {
            debug_assert!(layer.n % 2 == 0);
            for pair in 0..layer.n / 2 {
                let i = start + 2 * pair;
                blocks.push((i, i + 1, BigRational::new(BigInt::from(1), denom.clone())));
                exponents.push(layer.k);
                exponents.push(layer.k);
            }
        }
    }
    let dim = exponents.len();
    let mut gram = RatMatrix::zeros(dim, dim);
    for (i, j, v) in blocks {
        let v = frac_mod_one(&v);
        gram[(i, j)] = v.clone();
        gram[(j, i)] = v;
    }
    TwoAdicGram { exponents, gram }
}
