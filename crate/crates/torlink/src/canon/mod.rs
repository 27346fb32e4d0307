//! The canonical token package `Canon(A)` / `Tok(A)`.
//!
//! Per prime and per layer `k`, the pairing induces a nonsingular symmetric
//! form over `F_p` on the exponent-`p^k` generators. Odd primes record the
//! Legendre symbol of the layer determinant; at `p = 2` a layer is type A
//! (some odd diagonal) or type E (alternating), refined by a determinant
//! class mod 4/8 or a Z/8-valued Gauss phase respectively. The package is
//! deterministic, invariant under unimodular congruence and +-1
//! stabilization, and reproduced exactly by the canonical matrix assembled
//! from it.

mod gauss;
mod normalize;

pub use gauss::{enumerate_quotient_h, gauss_sum, gauss_u, quotient_size, QuotientReps, TwoAdicGram};
pub use normalize::{canonical_deltas, canonical_model, TwoLayerRaw};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{factor_bigint, frac_mod_one, legendre, IntMatrix};
use crate::linkform::{discriminant, PairingGram};
use crate::{Error, Result};

/// Tuning knobs for the canonicalization pipeline.
#[derive(Debug, Clone, Copy)]
pub struct CanonConfig {
    /// Cap on `|H_k|` enumerations in Gauss sums.
    pub gauss_cap: u128,
}

impl Default for CanonConfig {
    fn default() -> Self {
        CanonConfig { gauss_cap: 1 << 20 }
    }
}

/// Payload of one `(p, k)` layer record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LayerPayload {
    /// Odd prime: Legendre symbol of the layer determinant.
    Odd { x: i8 },
    /// `p = 2`, non-alternating layer; `delta` is the determinant class,
    /// absent at `k = 1` where the class is unique.
    TwoA { delta: Option<u8> },
    /// `p = 2`, alternating layer; `u` is the Gauss phase in `Z/8`.
    TwoE { u: u8 },
}

/// One nontrivial layer of the canonical invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerRecord {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub payload: LayerPayload,
}

/// The canonical invariant of a symmetric surgery matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenPackage {
    pub b1: usize,
    pub torsion_order: BigInt,
    /// Invariant factors `> 1` in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    /// Sorted by `(p, k)`, duplicate-free.
    pub layers: Vec<LayerRecord>,
    /// Gauss phases `u_(2,k)` for every `k` up to the maximal 2-exponent at
    /// which the layer-k type E condition holds (vacuously when the layer
    /// is empty), computed from the actual pairing.
    pub extended_gauss: Vec<(u32, u8)>,
}

impl TokenPackage {
    pub fn trivial(b1: usize) -> Self {
        TokenPackage {
            b1,
            torsion_order: BigInt::one(),
            invariant_factors: Vec::new(),
            layers: Vec::new(),
            extended_gauss: Vec::new(),
        }
    }

    /// Equality of the core fields, ignoring `extended_gauss`.
    pub fn strict_eq(&self, other: &TokenPackage) -> bool {
        self.b1 == other.b1
            && self.torsion_order == other.torsion_order
            && self.invariant_factors == other.invariant_factors
            && self.layers == other.layers
    }
}

/// One primary generator of the torsion group: Smith index, `e = v_p(d)`,
/// and the prime-to-p part `s = d / p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryGenerator {
    pub index: usize,
    pub e: u32,
    pub s: BigInt,
}

/// Indices with `v_p(d_i) > 0`, in stable order.
pub fn primary_generators(d: &[BigInt], p: u64) -> Vec<PrimaryGenerator> {
    let pb = BigInt::from(p);
    d.iter()
        .enumerate()
        .filter_map(|(index, di)| {
            let mut e = 0u32;
            let mut s = di.clone();
            while (&s % &pb).is_zero() {
                s /= &pb;
                e += 1;
            }
            (e > 0).then_some(PrimaryGenerator { index, e, s })
        })
        .collect()
}

/// The layer form `B_(p,k)` over `F_p` on the exponent-`p^k` generators,
/// together with the integral matrix `C_k` mod `2^k` used by the 2-primary
/// refinements.
#[derive(Debug, Clone)]
pub struct LayerMatrix {
    pub p: u64,
    pub k: u32,
    /// `B[a][b] = p^k s_i s_j gram[i][j] mod p`, entries in `0..p`.
    pub entries: Vec<Vec<u64>>,
    /// For `p = 2`: the same scaled matrix reduced mod `2^k`.
    pub c_k: Option<IntMatrix>,
}

impl LayerMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// Extract the `(p, k)` layer matrix from the Smith-basis Gram data.
pub fn layer_matrix(gram: &PairingGram, d: &[BigInt], p: u64, k: u32) -> Result<LayerMatrix> {
    let gens = primary_generators(d, p);
    let idx: Vec<&PrimaryGenerator> = gens.iter().filter(|g| g.e == k).collect();
    let m = idx.len();
    let pk = BigInt::from(p).pow(k);
    let pb = BigInt::from(p);
    let mut entries = vec![vec![0u64; m]; m];
    let mut c_int = IntMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let ga = idx[a];
            let gb = idx[b];
            let scaled = BigRational::from(&pk * &ga.s * &gb.s) * gram.entry(ga.index, gb.index);
            if !scaled.is_integer() {
                return Err(Error::NonIntegral(ga.index, gb.index));
            }
            let int = scaled.to_integer();
            entries[a][b] = int.mod_floor(&pb).to_u64().expect("residue fits u64");
            c_int[(a, b)] = int.mod_floor(&pk);
        }
    }
    Ok(LayerMatrix {
        p,
        k,
        entries,
        c_k: (p == 2).then_some(c_int),
    })
}

/// Legendre symbol of `det B_(p,k)` for odd `p`; the layer form of a
/// nonsingular pairing is nonsingular, so a vanishing determinant signals
/// corrupt upstream data.
pub fn odd_layer_invariant(b: &LayerMatrix) -> Result<i8> {
    assert!(b.p % 2 == 1, "odd_layer_invariant requires odd p");
    assert!(b.dim() > 0, "empty layer has no invariant");
    let det = det_mod_p(&b.entries, b.p);
    if det == 0 {
        return Err(Error::DegenerateLayer(b.p));
    }
    legendre(&BigInt::from(det), b.p)
}

/// Determinant of a small matrix over `F_p` by Gaussian elimination.
fn det_mod_p(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] % p != 0);
        let pivot = match pivot {
            Some(r) => r,
            None => return 0,
        };
        if pivot != col {
            a.swap(col, pivot);
            det = (p - det % p) % p;
        }
        let inv = inv_mod_p(a[col][col] % p, p);
        det = mulmod(det, a[col][col] % p, p);
        for r in col + 1..n {
            let f = mulmod(a[r][col] % p, inv, p);
            if f == 0 {
                continue;
            }
            for c in col..n {
                let sub = mulmod(f, a[col][c] % p, p);
                a[r][c] = (a[r][c] % p + p - sub) % p;
            }
        }
    }
    det % p
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Type of a 2-primary layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerType {
    A,
    E,
}

/// Type A iff some diagonal entry of `C_k` is odd; the empty layer is
/// vacuously type E.
pub fn two_layer_type(c_k: &IntMatrix) -> LayerType {
    for i in 0..c_k.rows() {
        if c_k[(i, i)].is_odd() {
            return LayerType::A;
        }
    }
    LayerType::E
}

/// Determinant refinement of a type A layer: none at `k = 1`, mod 4 at
/// `k = 2`, mod 8 at `k >= 3`.
pub fn two_typea_delta(c_k: &IntMatrix, k: u32) -> Result<Option<u8>> {
    if two_layer_type(c_k) != LayerType::A {
        return Err(Error::WrongType);
    }
    if k == 1 {
        return Ok(None);
    }
    let det = c_k.det()?;
    if det.is_even() {
        return Err(Error::EvenDeterminant);
    }
    let modulus = BigInt::from(if k == 2 { 4u8 } else { 8 });
    let delta = det.mod_floor(&modulus).to_u8().expect("small residue");
    Ok(Some(delta))
}

/// Full canonicalization pipeline with default configuration.
pub fn canon(a: &IntMatrix) -> Result<TokenPackage> {
    canon_with(a, &CanonConfig::default())
}

/// Full canonicalization pipeline.
pub fn canon_with(a: &IntMatrix, config: &CanonConfig) -> Result<TokenPackage> {
    let disc = discriminant(a)?;
    let d = disc.invariant_factors.clone();
    let torsion_order: BigInt = d.iter().product();

    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for di in &d {
        for (p, _) in factor_bigint(di)? {
            primes.insert(p);
        }
    }

    let mut layers = Vec::new();
    let mut extended_gauss = Vec::new();
    for &p in &primes {
        let gens = primary_generators(&d, p);
        let emax = gens.iter().map(|g| g.e).max().unwrap_or(0);
        if p != 2 {
            for k in 1..=emax {
                let lm = layer_matrix(&disc.gram, &d, p, k)?;
                if lm.dim() == 0 {
                    continue;
                }
                let x = odd_layer_invariant(&lm)?;
                layers.push(LayerRecord {
                    p,
                    k,
                    n: lm.dim(),
                    payload: LayerPayload::Odd { x },
                });
            }
        } else {
            let mut raws = Vec::new();
            for k in 1..=emax {
                let lm = layer_matrix(&disc.gram, &d, 2, k)?;
                if lm.dim() == 0 {
                    continue;
                }
                let c_k = lm.c_k.as_ref().expect("C_k present for p = 2");
                if c_k.det()?.is_even() {
                    return Err(Error::DegenerateLayer(2));
                }
                let type_a = two_layer_type(c_k) == LayerType::A;
                let raw_delta = if type_a { two_typea_delta(c_k, k)? } else { None };
                raws.push(TwoLayerRaw {
                    k,
                    n: lm.dim(),
                    type_a,
                    raw_delta,
                });
            }
            let deltas = canonical_deltas(&raws);
            let model = canonical_model(&raws, &deltas);
            for (raw, delta) in raws.iter().zip(&deltas) {
                let payload = if raw.type_a {
                    LayerPayload::TwoA { delta: *delta }
                } else {
                    debug_assert!(raw.n % 2 == 0, "alternating layers have even rank");
                    LayerPayload::TwoE {
                        u: gauss_u(&model, raw.k, config.gauss_cap)?,
                    }
                };
                layers.push(LayerRecord {
                    p: 2,
                    k: raw.k,
                    n: raw.n,
                    payload,
                });
            }
            // Extended Gauss data from the actual pairing, at every k
            // where the layer-k type E condition holds.
            let actual = two_adic_gram(&disc.gram, &gens);
            for k in 1..=emax {
                let type_e = match raws.iter().find(|r| r.k == k) {
                    None => true, // vacuous
                    Some(r) => !r.type_a,
                };
                if type_e {
                    extended_gauss.push((k, gauss_u(&actual, k, config.gauss_cap)?));
                }
            }
        }
    }

    Ok(TokenPackage {
        b1: disc.b1,
        torsion_order,
        invariant_factors: d,
        layers,
        extended_gauss,
    })
}

/// The 2-primary pairing in the basis `s_i e_i`, as a `TwoAdicGram`.
pub fn two_adic_gram(gram: &PairingGram, gens: &[PrimaryGenerator]) -> TwoAdicGram {
    let exps: Vec<u32> = gens.iter().map(|g| g.e).collect();
    let m = gens.len();
    let entries = crate::exact::RatMatrix::from_fn(m, m, |a, b| {
        let scale = BigRational::from(&gens[a].s * &gens[b].s);
        frac_mod_one(&(scale * gram.entry(gens[a].index, gens[b].index)))
    });
    TwoAdicGram {
        exponents: exps,
        gram: entries,
    }
}

// ---------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------

/// Canonical whitespace-free serialization, usable as a cache key.
/// `strict` omits the `xg2` trailer.
pub fn serialize(t: &TokenPackage, strict: bool) -> String {
    let mut out = format!("b1={}", t.b1);
    let mut i = 0;
    while i < t.layers.len() {
        let p = t.layers[i].p;
        out.push_str(&format!(";{p}:{{"));
        let mut first = true;
        while i < t.layers.len() && t.layers[i].p == p {
            if !first {
                out.push(',');
            }
            first = false;
            let l = &t.layers[i];
            out.push_str(&format!("k={},n={},", l.k, l.n));
            match l.payload {
                LayerPayload::Odd { x } => out.push_str(&format!("x={x}")),
                LayerPayload::TwoA { delta: None } => out.push('A'),
                LayerPayload::TwoA { delta: Some(d) } => out.push_str(&format!("A,d={d}")),
                LayerPayload::TwoE { u } => out.push_str(&format!("E,u={u}")),
            }
            i += 1;
        }
        out.push('}');
    }
    if !strict && !t.extended_gauss.is_empty() {
        out.push_str(";xg2=[");
        for (i, (k, u)) in t.extended_gauss.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("({k},{u})"));
        }
        out.push(']');
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn eat(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn eat_str(&mut self, s: &str) -> Result<()> {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            self.err(format!("expected \"{s}\""))
        }
    }

    fn try_str(&mut self, s: &str) -> bool {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.bytes[start] == b'-') {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse {
                pos: start,
                msg: "integer out of range".into(),
            })
    }
}

/// Parse the canonical serialization; inverse of [`serialize`].
pub fn parse(text: &str) -> Result<TokenPackage> {
    let mut c = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    c.eat_str("b1=")?;
    let b1 = c.int()?;
    if b1 < 0 {
        return c.err("b1 must be nonnegative");
    }
    let mut layers: Vec<LayerRecord> = Vec::new();
    let mut extended_gauss = Vec::new();
    while c.peek() == Some(b';') {
        c.eat(b';')?;
        if c.try_str("xg2=[") {
            loop {
                c.eat(b'(')?;
                let k = c.int()?;
                c.eat(b',')?;
                let u = c.int()?;
                c.eat(b')')?;
                if !(1..=63).contains(&k) || !(0..8).contains(&u) {
                    return c.err("xg2 entry out of range");
                }
                extended_gauss.push((k as u32, u as u8));
                if c.peek() == Some(b',') {
                    c.eat(b',')?;
                } else {
                    break;
                }
            }
            c.eat(b']')?;
            continue;
        }
        let p = c.int()?;
        if p < 2 {
            return c.err("prime must be at least 2");
        }
        let p = p as u64;
        if let Some(last) = layers.last() {
            if last.p >= p {
                return c.err("prime blocks must be strictly increasing");
            }
        }
        c.eat(b':')?;
        c.eat(b'{')?;
        let mut last_k = 0u32;
        loop {
            c.eat_str("k=")?;
            let k = c.int()?;
            if !(1..=63).contains(&k) || (k as u32) <= last_k {
                return c.err("layer k out of range or out of order");
            }
            let k = k as u32;
            last_k = k;
            c.eat(b',')?;
            c.eat_str("n=")?;
            let n = c.int()?;
            if n < 1 {
                return c.err("layer dimension must be positive");
            }
            c.eat(b',')?;
            let payload = match c.peek() {
                Some(b'x') => {
                    if p == 2 {
                        return c.err("odd payload on p = 2");
                    }
                    c.eat_str("x=")?;
                    let x = c.int()?;
                    if x != 1 && x != -1 {
                        return c.err("x must be 1 or -1");
                    }
                    LayerPayload::Odd { x: x as i8 }
                }
                Some(b'A') => {
                    if p != 2 {
                        return c.err("type A payload on odd p");
                    }
                    c.eat(b'A')?;
                    let delta = if c.peek() == Some(b',') && c.peek_at(1) == Some(b'd') {
                        c.eat_str(",d=")?;
                        let d = c.int()?;
                        let valid = match k {
                            1 => false,
                            2 => d == 1 || d == 3,
                            _ => [1, 3, 5, 7].contains(&d),
                        };
                        if !valid {
                            return c.err("delta out of range for this k");
                        }
                        Some(d as u8)
                    } else {
                        if k != 1 {
                            return c.err("missing delta for k >= 2");
                        }
                        None
                    };
                    LayerPayload::TwoA { delta }
                }
                Some(b'E') => {
                    if p != 2 {
                        return c.err("type E payload on odd p");
                    }
                    c.eat(b'E')?;
                    c.eat_str(",u=")?;
                    let u = c.int()?;
                    if !(0..8).contains(&u) {
                        return c.err("u out of range");
                    }
                    if n % 2 != 0 {
                        return c.err("type E layer must have even dimension");
                    }
                    LayerPayload::TwoE { u: u as u8 }
                }
                _ => return c.err("expected layer payload"),
            };
            layers.push(LayerRecord {
                p,
                k,
                n: n as usize,
                payload,
            });
            if c.peek() == Some(b',') && c.peek_at(1) == Some(b'k') {
                c.eat(b',')?;
                continue;
            }
            break;
        }
        c.eat(b'}')?;
    }
    if c.pos != c.bytes.len() {
        return c.err("trailing input");
    }
    let invariant_factors = factors_from_layers(&layers);
    let torsion_order = invariant_factors.iter().product();
    Ok(TokenPackage {
        b1: b1 as usize,
        torsion_order,
        invariant_factors,
        layers,
        extended_gauss,
    })
}

/// Reconstruct the invariant factors from the layer dimensions: each
/// `(p, k)` layer contributes `n` cyclic factors `p^k`, combined
/// largest-with-largest across primes.
pub fn factors_from_layers(layers: &[LayerRecord]) -> Vec<BigInt> {
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for l in layers {
        let entry = match per_prime.iter_mut().find(|(p, _)| *p == l.p) {
            Some(e) => e,
            None => {
                per_prime.push((l.p, Vec::new()));
                per_prime.last_mut().unwrap()
            }
        };
        for _ in 0..l.n {
            entry.1.push(l.k);
        }
    }
    let rows = per_prime
        .iter()
        .map(|(_, ks)| ks.len())
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    for slot in 0..rows {
        let mut f = BigInt::one();
        for (p, ks) in &per_prime {
            let mut sorted = ks.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a)); // descending
            if let Some(&k) = sorted.get(slot) {
                f *= BigInt::from(*p).pow(k);
            }
        }
        out.push(f);
    }
    out.reverse();
    out
}
