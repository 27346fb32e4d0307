//! Canonical invariants of torsion linking pairings.
//!
//! Given a symmetric integer surgery matrix `A`, this crate computes the
//! canonical token package encoding the free rank `b1` together with the
//! isometry class of the torsion linking pairing on the cokernel of `A`,
//! and realizes token packages back into canonical symmetric matrices and
//! symbolic module descriptors.
//!
//! The main entry points are:
//!
//! - [`canon::canon`] — surgery matrix to canonical token package,
//! - [`dictionary::realize`] — token package to canonical matrix plus
//!   symbolic realization descriptor,
//! - [`kirby::random_walk`] — randomized invariance harness over handle
//!   slides and blow-ups,
//! - [`cli`] — the command line front end used by the `torlink` binary.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals,
//! and sums of roots of unity in `Z[zeta_{2^m}]` for the Gauss invariants.
//! No floating point is used anywhere.

pub mod canon;
pub mod cli;
pub mod cyclotomic;
pub mod dictionary;
pub mod exact;
pub mod kirby;
pub mod linkform;

use canon::TokenPackage;

/// Crate-wide error type.
///
/// Most operations are total on their documented domain; the variants here
/// are either precondition violations surfaced to the caller or hard
/// internal invariant violations that are deliberately loud.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric at entry pair ({0},{1}) vs ({1},{0})")]
    NotSymmetric(usize, usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("columns do not form a saturated independent set")]
    NotSaturated,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("entry exceeded the {0}-bit growth cap")]
    BitCapExceeded(u64),
    #[error("non-integral layer entry at ({0},{1}); upstream pairing data is inconsistent")]
    NonIntegral(usize, usize),
    #[error("layer form is degenerate mod {0}; upstream pairing data is inconsistent")]
    DegenerateLayer(u64),
    #[error("determinant refinement requested on a type E layer")]
    WrongType,
    #[error("type A layer has even determinant; upstream pairing data is inconsistent")]
    EvenDeterminant,
    #[error("enumeration size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("Gauss sum is not sqrt(N) times an eighth root of unity (N = {0})")]
    NoMatch(u128),
    #[error("invariant factor {0} is too large to factor")]
    FactorTooLarge(String),
    #[error("not a valid fraction pair: m={m}, q={q} (need m > q > 0 coprime)")]
    BadFraction { m: String, q: String },
    #[error("type E layer at k={k} has Gauss invariant u={u} outside {{0,4}}; no generator block realizes it")]
    UnrealizableU { k: u32, u: u8 },
    #[error("realization mismatch: canon(assemble(T)) != T")]
    RealizationMismatch {
        expected: Box<TokenPackage>,
        actual: Box<TokenPackage>,
    },
    #[error("destabilization index {0} does not point at a split (+/-1) block")]
    BadDestabilize(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
