//! Compute the canonical token package of a few surgery matrices.
//!
//! ```bash
//! cargo run --example canonical_invariant
//! ```

use torlink::canon::{canon, serialize};
use torlink::exact::IntMatrix;

fn main() {
    let samples: Vec<(&str, IntMatrix)> = vec![
        ("(1), the 3-sphere", IntMatrix::from_rows(&[vec![1]])),
        ("(3), lens space L(3,1)", IntMatrix::from_rows(&[vec![3]])),
        (
            "hyperbolic mod 3",
            IntMatrix::from_rows(&[vec![0, 3], vec![3, 0]]),
        ),
        ("2x2 zero, (S2 x S1)#(S2 x S1)", IntMatrix::zeros(2, 2)),
        (
            "diag(2,2), odd type at k=1",
            IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]),
        ),
        (
            "hyperbolic mod 2, even type",
            IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]]),
        ),
        ("(-4)", IntMatrix::from_rows(&[vec![-4]])),
        (
            "diag(4,3), mixed primes",
            IntMatrix::from_rows(&[vec![4, 0], vec![0, 3]]),
        ),
        (
            "a denser presentation of Z/9",
            IntMatrix::from_rows(&[vec![2, 1], vec![1, 5]]),
        ),
    ];

    for (name, a) in samples {
        let t = canon(&a).expect("canon");
        println!("{name}");
        println!("  token   {}", serialize(&t, false));
        println!(
            "  b1 = {}, |Tor| = {}, invariant factors {:?}",
            t.b1,
            t.torsion_order,
            t.invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
        );
        println!();
    }
}
