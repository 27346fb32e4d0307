//! Step B: realize a token package as a canonical symmetric matrix and a
//! symbolic module descriptor.
//!
//! Cyclic pairings `<q/m>` are presented by the linear plumbing matrix of
//! the negative continued fraction of `m/q`; the even 2-primary classes by
//! the displayed rank-two blocks. `assemble` always verifies its output by
//! running the canonicalization again and comparing packages, so a bad
//! generator tables turns into a loud `RealizationMismatch` rather than a
//! silently wrong matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canon::{self, CanonConfig, LayerPayload, TokenPackage};
use crate::exact::{legendre, IntMatrix};
use crate::{Error, Result};

/// Negative (Hirzebruch-Jung) continued fraction expansion of `m/q`:
/// `m/q = a1 - 1/(a2 - 1/(... - 1/ar))` with every `a_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HJExpansion {
    pub m: u64,
    pub q: u64,
    pub coeffs: Vec<u64>,
}

/// Compute the expansion; `BadFraction` unless `m > q > 0` and coprime.
pub fn hj_expansion(m: u64, q: u64) -> Result<HJExpansion> {
    if !(m > q && q > 0) || num_integer::gcd(m, q) != 1 {
        return Err(Error::BadFraction {
            m: m.to_string(),
            q: q.to_string(),
        });
    }
    let mut coeffs = Vec::new();
    let (mut a, mut b) = (m, q);
    while b > 0 {
        let c = a.div_ceil(b);
        coeffs.push(c);
        let next = c * b - a;
        a = b;
        b = next;
    }
    debug_assert!(coeffs.iter().all(|&c| c >= 2));
    Ok(HJExpansion { m, q, coeffs })
}

/// Evaluate an expansion back to `m/q`; used as the independent oracle for
/// `hj_expansion` in tests and the self-test.
pub fn hj_evaluate(coeffs: &[u64]) -> Option<BigRational> {
    let mut acc: Option<BigRational> = None;
    for &a in coeffs.iter().rev() {
        let a = BigRational::from(BigInt::from(a));
        acc = Some(match acc {
            None => a,
            Some(prev) => {
                if prev.is_zero() {
                    return None;
                }
                a - prev.recip()
            }
        });
    }
    acc
}

/// Determinant of the tridiagonal plumbing matrix of `coeffs`, by the
/// continuant recurrence `D_r = a_r D_(r-1) - D_(r-2)`.
pub fn plumbing_det(coeffs: &[u64]) -> BigInt {
    let mut prev = BigInt::one(); // D_0
    let mut cur = BigInt::one(); // D_(-1) placeholder handled below
    for (i, &a) in coeffs.iter().enumerate() {
        let next = if i == 0 {
            BigInt::from(a)
        } else {
            BigInt::from(a) * &cur - &prev
        };
        prev = std::mem::replace(&mut cur, next);
    }
    if coeffs.is_empty() {
        BigInt::one()
    } else {
        cur
    }
}

/// Tridiagonal plumbing matrix with diagonal `a_i` and off-diagonal ones.
/// Its determinant is `m` and the top-left entry of its inverse is `q/m`;
/// both are asserted via the continuant recurrence.
pub fn plumbing_matrix(e: &HJExpansion) -> IntMatrix {
    let r = e.coeffs.len();
    let mut mat = IntMatrix::zeros(r, r);
    for (i, &a) in e.coeffs.iter().enumerate() {
        mat[(i, i)] = BigInt::from(a);
        if i + 1 < r {
            mat[(i, i + 1)] = BigInt::one();
            mat[(i + 1, i)] = BigInt::one();
        }
    }
    debug_assert_eq!(plumbing_det(&e.coeffs), BigInt::from(e.m));
    // (C^-1)_11 = det(minor_11) / det = continuant of a_2.. / m.
    debug_assert_eq!(plumbing_det(&e.coeffs[1..]), BigInt::from(e.q));
    mat
}

/// Smallest integer `>= 2` that is a quadratic nonresidue mod the odd
/// prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&x| legendre(&BigInt::from(x), p).unwrap() == -1)
        .expect("every odd prime has a nonresidue below p")
}

/// Labels of the primitive generator blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockLabel {
    /// Cyclic `<1/p^k>` (square class `+`), presented by `(p^k)`.
    OddPlus { p: u64, k: u32 },
    /// Cyclic `<eps_p/p^k>` (square class `-`), presented by a plumbing.
    OddMinus { p: u64, k: u32 },
    /// Cyclic `<q/2^k>` presented by `C(2^k, q)`.
    TwoCyclic { k: u32, q: u64 },
    /// Hyperbolic even block at level `2^k`.
    E { k: u32 },
    /// The second even generator at level `2^k`.
    F { k: u32 },
    /// Rank-one zero block (one unit of free rank).
    Zero,
}

impl BlockLabel {
    pub fn display(&self) -> String {
        match self {
            BlockLabel::OddPlus { p, k } => format!("A({}^{k},+)", p),
            BlockLabel::OddMinus { p, k } => format!("A({}^{k},-)", p),
            BlockLabel::TwoCyclic { k, q } => format!("A(2^{k},{q})"),
            BlockLabel::E { k } => format!("E(2^{k})"),
            BlockLabel::F { k } => format!("F(2^{k})"),
            BlockLabel::Zero => "Z(S2xS1)".to_string(),
        }
    }
}

/// A generator block: label plus its presenting matrix.
#[derive(Debug, Clone)]
pub struct GeneratorBlock {
    pub label: BlockLabel,
    pub matrix: IntMatrix,
}

/// The presenting matrix for a block label.
pub fn block_for(label: &BlockLabel) -> Result<GeneratorBlock> {
    let matrix = match label {
        BlockLabel::OddPlus { p, k } => {
            let pk = BigInt::from(*p).pow(*k);
            IntMatrix::from_bigint_rows(vec![vec![pk]])
        }
        BlockLabel::OddMinus { p, k } => {
            let pk = checked_pow(*p, *k)?;
            let eps = least_nonresidue(*p);
            plumbing_matrix(&hj_expansion(pk, eps)?)
        }
        BlockLabel::TwoCyclic { k, q } => {
            let pk = checked_pow(2, *k)?;
            plumbing_matrix(&hj_expansion(pk, *q % pk)?)
        }
        BlockLabel::E { k } => {
            let pk = BigInt::from(2).pow(*k);
            IntMatrix::from_bigint_rows(vec![
                vec![BigInt::zero(), pk.clone()],
                vec![pk, BigInt::zero()],
            ])
        }
        BlockLabel::F { k } => {
            let pk = BigInt::from(2).pow(*k);
            IntMatrix::from_bigint_rows(vec![
                vec![BigInt::zero(), pk.clone()],
                vec![pk.clone(), pk * 2],
            ])
        }
        BlockLabel::Zero => IntMatrix::zeros(1, 1),
    };
    Ok(GeneratorBlock {
        label: label.clone(),
        matrix,
    })
}

fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .ok_or_else(|| Error::FactorTooLarge(format!("{p}^{k}")))
}

/// The ordered block list for a token package: `b1` zero blocks, then per
/// `(p, k)` ascending the layer's generator blocks with the negative or
/// determinant-carrying block last, E blocks before F blocks.
pub fn block_plan(t: &TokenPackage) -> Result<Vec<BlockLabel>> {
    let mut labels = Vec::new();
    for _ in 0..t.b1 {
        labels.push(BlockLabel::Zero);
    }
    let mut sorted: Vec<_> = t.layers.iter().collect();
    sorted.sort_by_key(|l| (l.p, l.k));
    for layer in sorted {
        match layer.payload {
            LayerPayload::Odd { x } => {
                let minus = usize::from(x == -1);
                for _ in 0..layer.n - minus {
                    labels.push(BlockLabel::OddPlus {
                        p: layer.p,
                        k: layer.k,
                    });
                }
                if minus == 1 {
                    labels.push(BlockLabel::OddMinus {
                        p: layer.p,
                        k: layer.k,
                    });
                }
            }
            LayerPayload::TwoA { delta } => {
                let q = delta.map_or(1, u64::from);
                for _ in 0..layer.n - 1 {
                    labels.push(BlockLabel::TwoCyclic { k: layer.k, q: 1 });
                }
                labels.push(BlockLabel::TwoCyclic { k: layer.k, q });
            }
            LayerPayload::TwoE { u } => {
                if u != 0 && u != 4 {
                    return Err(Error::UnrealizableU { k: layer.k, u });
                }
                let t_count = usize::from(u == 4);
                for _ in 0..layer.n / 2 - t_count {
                    labels.push(BlockLabel::E { k: layer.k });
                }
                for _ in 0..t_count {
                    labels.push(BlockLabel::F { k: layer.k });
                }
            }
        }
    }
    Ok(labels)
}

/// Assemble the canonical matrix `B(T)` and verify `canon(B(T)) = T` in
/// strict-paper mode. Never returns an unverified matrix.
pub fn assemble(t: &TokenPackage) -> Result<IntMatrix> {
    assemble_with(t, &CanonConfig::default())
}

pub fn assemble_with(t: &TokenPackage, config: &CanonConfig) -> Result<IntMatrix> {
    let labels = block_plan(t)?;
    let blocks: Vec<GeneratorBlock> = labels
        .iter()
        .map(block_for)
        .collect::<Result<Vec<_>>>()?;
    let mats: Vec<&IntMatrix> = blocks.iter().map(|b| &b.matrix).collect();
    let b = IntMatrix::block_diag(&mats);
    let check = canon::canon_with(&b, config)?;
    if !check.strict_eq(t) {
        return Err(Error::RealizationMismatch {
            expected: Box::new(t.clone()),
            actual: Box::new(check),
        });
    }
    Ok(b)
}

/// The normalization shift `3 b+ - 2 b-`.
pub fn shift(b: &IntMatrix) -> Result<i64> {
    let sig = b.signature()?;
    Ok(3 * sig.b_plus as i64 - 2 * sig.b_minus as i64)
}

/// One tensor factor of a realization descriptor.
#[derive(Debug, Clone)]
pub struct Factor {
    pub label: BlockLabel,
    pub shift: i64,
}

/// The symbolic realization: canonical matrix, global shift, and the
/// tensor factorization into local blocks.
#[derive(Debug, Clone)]
pub struct RealizationDescriptor {
    pub matrix: IntMatrix,
    pub shift: i64,
    pub factors: Vec<Factor>,
}

impl RealizationDescriptor {
    /// Symbolic name of the whole module, `L_{B(T)}[shift]`.
    pub fn module_name(&self) -> String {
        format!("L_B[{}]", self.shift)
    }
}

/// Realize a token package: `B(T)`, the global shift, and one factor per
/// generator block (plus `b1` zero-block factors). The factor shifts sum
/// to the global shift by additivity of the signature.
pub fn realize(t: &TokenPackage) -> Result<RealizationDescriptor> {
    realize_with(t, &CanonConfig::default())
}

pub fn realize_with(t: &TokenPackage, config: &CanonConfig) -> Result<RealizationDescriptor> {
    let matrix = assemble_with(t, config)?;
    let global = shift(&matrix)?;
    let labels = block_plan(t)?;
    let mut factors = Vec::new();
    let mut total = 0i64;
    for label in labels {
        let block = block_for(&label)?;
        let s = shift(&block.matrix)?;
        total += s;
        factors.push(Factor { label, shift: s });
    }
    debug_assert_eq!(total, global, "factor shifts must sum to the global shift");
    Ok(RealizationDescriptor {
        matrix,
        shift: global,
        factors,
    })
}

/// Report of the stabilization shift identities for one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftReport {
    pub sh: i64,
    pub sh_plus: i64,
    pub sh_minus: i64,
    pub ok: bool,
}

/// Check `sh(B (+) (1)) = sh(B) + 3` and `sh(B (+) (-1)) = sh(B) - 2`.
pub fn stabilize_shift_check(b: &IntMatrix) -> Result<ShiftReport> {
    let sh = shift(b)?;
    let plus_block = IntMatrix::from_rows(&[vec![1]]);
    let minus_block = IntMatrix::from_rows(&[vec![-1]]);
    let sh_plus = shift(&IntMatrix::block_diag(&[b, &plus_block]))?;
    let sh_minus = shift(&IntMatrix::block_diag(&[b, &minus_block]))?;
    Ok(ShiftReport {
        sh,
        sh_plus,
        sh_minus,
        ok: sh_plus == sh + 3 && sh_minus == sh - 2,
    })
}

/// Symbolic record of the rank-one time-reversal duality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityRecord {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
    pub sign_ambiguity: &'static str,
    /// Extra note in the first nontrivial case.
    pub self_duality: Option<String>,
}

/// The formal identity `L(-n) = L(n)^v[1]`, up to an overall sign. Purely
/// symbolic metadata; no module-level computation is performed.
pub fn dual_rank_one(n: i64) -> DualityRecord {
    DualityRecord {
        n,
        lhs: format!("L({})", -n),
        rhs: format!("L({n})^v[1]"),
        sign_ambiguity: "+-1",
        self_duality: (n == 2).then(|| "L(2)^v = L(2)[4]".to_string()),
    }
}
