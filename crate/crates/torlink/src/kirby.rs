//! Kirby-move engine and randomized invariance harness.
//!
//! Moves are the matrix shadows of handle slides and blow-ups: unimodular
//! congruence, adding a split `(+-1)` block, and deleting a literally split
//! `(+-1)` block. Walks are per-seed reproducible; the RNG is a splittable
//! splitmix64 so results do not depend on scheduling.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::canon::{canon_with, serialize, CanonConfig, TokenPackage};
use crate::exact::IntMatrix;
use crate::{Error, Result};

/// Minimal splittable PRNG (splitmix64).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Derive an independent stream.
    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64() ^ 0x6a09e667f3bcc909)
    }
}

/// One Kirby move in matrix form.
#[derive(Debug, Clone)]
pub enum KirbyMove {
    /// Handle slide: `A -> P^T A P` with `|det P| = 1`.
    Congruence(IntMatrix),
    /// Blow-up: `A -> A (+) (sign)`.
    Stabilize(i8),
    /// Blow-down of a split `(+-1)` block at the given index.
    Destabilize(usize),
}

/// Random unimodular matrix: a product of `steps` elementary operations
/// (transvections with coefficients in `[-3, 3]`, swaps, sign flips).
pub fn random_unimodular(n: usize, seed: u64, steps: usize) -> IntMatrix {
    let mut rng = SplitMix64::new(seed);
    random_unimodular_from(n, &mut rng, steps)
}

fn random_unimodular_from(n: usize, rng: &mut SplitMix64, steps: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n == 0 {
        return p;
    }
    if n == 1 {
        if rng.below(2) == 1 {
            p[(0, 0)] = BigInt::from(-1);
        }
        return p;
    }
    for _ in 0..steps {
        match rng.below(3) {
            0 => {
                // Transvection: col_j += c * col_i.
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64) as usize;
                if i == j {
                    j = (j + 1) % n;
                }
                let mut c = rng.range_i64(-3, 3);
                if c == 0 {
                    c = 1;
                }
                for r in 0..n {
                    let upd = &p[(r, j)] + BigInt::from(c) * &p[(r, i)];
                    p[(r, j)] = upd;
                }
            }
            1 => {
                // Swap two columns.
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64) as usize;
                if i == j {
                    j = (j + 1) % n;
                }
                for r in 0..n {
                    let x = p[(r, i)].clone();
                    p[(r, i)] = p[(r, j)].clone();
                    p[(r, j)] = x;
                }
            }
            _ => {
                // Flip the sign of one column.
                let i = rng.below(n as u64) as usize;
                for r in 0..n {
                    let upd = -p[(r, i)].clone();
                    p[(r, i)] = upd;
                }
            }
        }
    }
    debug_assert_eq!(p.det().unwrap().abs(), BigInt::one());
    p
}

/// Apply one move. `BadDestabilize` if the indexed block is not split.
pub fn apply(a: &IntMatrix, mv: &KirbyMove) -> Result<IntMatrix> {
    match mv {
        KirbyMove::Congruence(p) => {
            if p.rows() != a.rows() || !p.is_square() {
                return Err(Error::DimensionMismatch(format!(
                    "congruence by {}x{} on {}x{}",
                    p.rows(),
                    p.cols(),
                    a.rows(),
                    a.cols()
                )));
            }
            Ok(p.transpose().mul(a).mul(p))
        }
        KirbyMove::Stabilize(sign) => {
            let block = IntMatrix::from_rows(&[vec![*sign as i64]]);
            Ok(IntMatrix::block_diag(&[a, &block]))
        }
        KirbyMove::Destabilize(idx) => {
            let n = a.rows();
            if *idx >= n || !is_split_unit(a, *idx) {
                return Err(Error::BadDestabilize(*idx));
            }
            let keep: Vec<usize> = (0..n).filter(|i| i != idx).collect();
            Ok(IntMatrix::from_fn(n - 1, n - 1, |i, j| {
                a[(keep[i], keep[j])].clone()
            }))
        }
    }
}

/// True when row/column `idx` is zero off the diagonal and the diagonal
/// entry is `+-1`.
pub fn is_split_unit(a: &IntMatrix, idx: usize) -> bool {
    if a[(idx, idx)].abs() != BigInt::one() {
        return false;
    }
    (0..a.rows()).all(|j| j == idx || (a[(idx, j)].is_zero() && a[(j, idx)].is_zero()))
}

fn split_unit_indices(a: &IntMatrix) -> Vec<usize> {
    (0..a.rows()).filter(|&i| is_split_unit(a, i)).collect()
}

/// Configuration of the random walk.
#[derive(Debug, Clone, Copy)]
pub struct WalkConfig {
    /// Stabilization stops once the matrix reaches this size.
    pub max_n: usize,
    pub canon: CanonConfig,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            max_n: 12,
            canon: CanonConfig::default(),
        }
    }
}

/// Outcome of one random walk: the token package at every step, and the
/// first step at which it diverged from the initial one, if any.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub seed: u64,
    pub steps: usize,
    pub initial: IntMatrix,
    pub final_matrix: IntMatrix,
    pub initial_package: TokenPackage,
    pub checkpoints: Vec<TokenPackage>,
    pub pass: bool,
    pub first_divergence: Option<usize>,
}

impl OrbitReport {
    pub fn divergence_message(&self) -> Option<String> {
        self.first_divergence.map(|step| {
            format!(
                "walk seed {} diverged at step {}: {} != {}",
                self.seed,
                step,
                serialize(&self.checkpoints[step], false),
                serialize(&self.initial_package, false),
            )
        })
    }
}

/// Random walk through the Kirby orbit of `a`, recording the canonical
/// package at every step.
pub fn random_walk(a: &IntMatrix, seed: u64, steps: usize) -> Result<(IntMatrix, OrbitReport)> {
    random_walk_with(a, seed, steps, &WalkConfig::default(), &|m, cfg| {
        canon_with(m, cfg)
    })
}

/// Walk with a caller-supplied invariant function. The harness self-test
/// injects a faulty invariant here to confirm that divergence is caught.
pub fn random_walk_with(
    a: &IntMatrix,
    seed: u64,
    steps: usize,
    config: &WalkConfig,
    invariant: &dyn Fn(&IntMatrix, &CanonConfig) -> Result<TokenPackage>,
) -> Result<(IntMatrix, OrbitReport)> {
    a.require_symmetric()?;
    let mut rng = SplitMix64::new(seed);
    let initial_package = invariant(a, &config.canon)?;
    let mut current = a.clone();
    let mut checkpoints = Vec::with_capacity(steps);
    let mut first_divergence = None;
    for step in 0..steps {
        let mv = pick_move(&current, &mut rng, config.max_n);
        current = apply(&current, &mv)?;
        let pkg = invariant(&current, &config.canon)?;
        if pkg != initial_package && first_divergence.is_none() {
            first_divergence = Some(step);
        }
        checkpoints.push(pkg);
    }
    let report = OrbitReport {
        seed,
        steps,
        initial: a.clone(),
        final_matrix: current.clone(),
        initial_package,
        checkpoints,
        pass: first_divergence.is_none(),
        first_divergence,
    };
    Ok((current, report))
}

fn pick_move(a: &IntMatrix, rng: &mut SplitMix64, max_n: usize) -> KirbyMove {
    let n = a.rows();
    let splits = split_unit_indices(a);
    loop {
        match rng.below(4) {
            0 | 1 => {
                if n == 0 {
                    continue;
                }
                let mut local = rng.split();
                let ops = 1 + local.below(3) as usize;
                return KirbyMove::Congruence(random_unimodular_from(n, &mut local, ops));
            }
            2 => {
                if n >= max_n {
                    continue;
                }
                let sign = if rng.below(2) == 0 { 1 } else { -1 };
                return KirbyMove::Stabilize(sign);
            }
            _ => {
                if splits.is_empty() {
                    continue;
                }
                let idx = splits[rng.below(splits.len() as u64) as usize];
                return KirbyMove::Destabilize(idx);
            }
        }
    }
}
