//! Differential invariance properties on random inputs: the canonical
//! package must be constant along random Kirby orbits, and congruence
//! must preserve the discriminant data.

use torlink::canon::canon;
use torlink::exact::IntMatrix;
use torlink::kirby::{random_unimodular, random_walk, SplitMix64};
use torlink::linkform::discriminant;

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

#[test]
fn canon_constant_along_random_orbits() {
    let mut rng = SplitMix64::new(0x0B17);
    for trial in 0..40u64 {
        let n = 1 + rng.below(6) as usize;
        let a = random_symmetric(n, 5, &mut rng);
        let seed = rng.next_u64();
        let (_, report) = random_walk(&a, seed, 30).expect("walk");
        assert!(
            report.pass,
            "trial {trial}: {}",
            report.divergence_message().unwrap_or_default()
        );
    }
}

#[test]
fn congruence_preserves_canon_and_factors() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..60 {
        let n = 1 + rng.below(5) as usize;
        let a = random_symmetric(n, 6, &mut rng);
        let p = random_unimodular(n, rng.next_u64(), 8);
        let b = p.transpose().mul(&a).mul(&p);
        let da = discriminant(&a).unwrap();
        let db = discriminant(&b).unwrap();
        assert_eq!(da.b1, db.b1);
        assert_eq!(da.invariant_factors, db.invariant_factors);
        assert_eq!(canon(&a).unwrap(), canon(&b).unwrap());
    }
}

#[test]
fn signature_invariant_under_random_congruence() {
    let mut rng = SplitMix64::new(31337);
    for _ in 0..60 {
        let n = 1 + rng.below(6) as usize;
        let a = random_symmetric(n, 7, &mut rng);
        let p = random_unimodular(n, rng.next_u64(), 10);
        let b = p.transpose().mul(&a).mul(&p);
        let sa = a.signature().unwrap();
        let sb = b.signature().unwrap();
        assert_eq!((sa.b_plus, sa.b_minus, sa.b_zero), (sb.b_plus, sb.b_minus, sb.b_zero));
    }
}

#[test]
fn assembly_is_deterministic() {
    let mut rng = SplitMix64::new(404);
    let mut done = 0;
    while done < 20 {
        let n = 1 + rng.below(4) as usize;
        let a = random_symmetric(n, 6, &mut rng);
        let t = canon(&a).unwrap();
        let first = torlink::dictionary::assemble(&t);
        let second = torlink::dictionary::assemble(&t);
        match (first, second) {
            (Ok(x), Ok(y)) => {
                assert_eq!(x, y, "equal packages must produce bit-identical matrices");
                done += 1;
            }
            (Err(_), Err(_)) => {}
            other => panic!("nondeterministic assemble outcome: {other:?}"),
        }
    }
}

#[test]
fn stabilization_preserves_canon() {
    let mut rng = SplitMix64::new(987);
    for _ in 0..40 {
        let n = 1 + rng.below(5) as usize;
        let a = random_symmetric(n, 6, &mut rng);
        let t = canon(&a).unwrap();
        for sign in [1i64, -1] {
            let block = IntMatrix::from_rows(&[vec![sign]]);
            let stab = IntMatrix::block_diag(&[&a, &block]);
            assert_eq!(canon(&stab).unwrap(), t);
        }
    }
}
