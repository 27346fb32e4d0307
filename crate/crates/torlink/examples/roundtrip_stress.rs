//! Randomized differential stress: congruence and stabilization
//! invariance of the canonical package, and the realization round trip
//! canon(assemble(canon(A))) = canon(A) on realizable tokens.
//!
//! ```bash
//! cargo run --release --example roundtrip_stress [trials]
//! ```

use torlink::canon::{canon, serialize};
use torlink::dictionary::assemble;
use torlink::exact::IntMatrix;
use torlink::kirby::{random_unimodular, SplitMix64};
use torlink::Error;

fn random_symmetric(n: usize, bound: i64, rng: &mut SplitMix64) -> IntMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.range_i64(-bound, bound);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    IntMatrix::from_rows(&rows)
}

// Block sums of 2-power blocks, to hammer the mixed 2-layer cases.
fn random_two_primary(rng: &mut SplitMix64) -> IntMatrix {
    let blocks = 1 + rng.below(3);
    let mut mats = Vec::new();
    for _ in 0..blocks {
        let k = 1 + rng.below(3) as u32;
        let s = 1i64 << k;
        match rng.below(4) {
            0 | 1 => {
                let odd = [1i64, 3, 5, 7, -1, -3][rng.below(6) as usize];
                mats.push(IntMatrix::from_rows(&[vec![s * odd]]));
            }
            2 => mats.push(IntMatrix::from_rows(&[vec![0, s], vec![s, 0]])),
            _ => mats.push(IntMatrix::from_rows(&[vec![0, s], vec![s, 2 * s]])),
        }
    }
    let refs: Vec<&IntMatrix> = mats.iter().collect();
    IntMatrix::block_diag(&refs)
}

fn main() {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2000);
    let mut rng = SplitMix64::new(20260808);
    let mut roundtrip_ok = 0u64;
    let mut unrealizable = 0u64;
    for trial in 0..trials {
        let a = if trial % 2 == 0 {
            let n = 1 + (rng.below(5) as usize);
            random_symmetric(n, 6, &mut rng)
        } else {
            random_two_primary(&mut rng)
        };
        let n = a.rows();
        let t = canon(&a).expect("canon");

        // Congruence invariance.
        let p = random_unimodular(n, rng.next_u64(), 6);
        let b = p.transpose().mul(&a).mul(&p);
        let t2 = canon(&b).expect("canon of congruent matrix");
        assert_eq!(
            t,
            t2,
            "trial {trial}: congruence changed the package\nA = {a:?}\nP = {p:?}"
        );

        // Stabilization invariance.
        for sign in [1i64, -1] {
            let block = IntMatrix::from_rows(&[vec![sign]]);
            let stab = IntMatrix::block_diag(&[&a, &block]);
            assert_eq!(canon(&stab).unwrap(), t, "trial {trial}: stabilization by {sign}");
        }

        // Realization round trip.
        match assemble(&t) {
            Ok(_) => roundtrip_ok += 1,
            Err(Error::UnrealizableU { .. }) => unrealizable += 1,
            Err(e) => panic!(
                "trial {trial}: round trip failed: {e}\nA = {a:?}\ntoken {}",
                serialize(&t, false)
            ),
        }
    }
    println!("{trials} trials: all invariance checks passed");
    println!("  realization round trips: {roundtrip_ok}");
    println!("  unrealizable u rejected: {unrealizable}");
}
