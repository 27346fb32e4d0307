//! Fuzz the canonical invariant along random Kirby walks: handle slides,
//! blow-ups and blow-downs must never change the token package.
//!
//! ```bash
//! cargo run --release --example kirby_walks
//! ```

use torlink::canon::serialize;
use torlink::exact::IntMatrix;
use torlink::kirby::random_walk;

fn main() {
    let matrices: Vec<(&str, IntMatrix)> = vec![
        ("(3)", IntMatrix::from_rows(&[vec![3]])),
        ("hyperbolic mod 3", IntMatrix::from_rows(&[vec![0, 3], vec![3, 0]])),
        ("hyperbolic mod 2", IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]])),
        ("diag(4,3)", IntMatrix::from_rows(&[vec![4, 0], vec![0, 3]])),
        (
            "a random-looking presentation",
            IntMatrix::from_rows(&[vec![5, 2, 0], vec![2, -3, 1], vec![0, 1, 4]]),
        ),
    ];

    let walks = 10;
    let steps = 40;
    for (name, a) in matrices {
        let mut all_pass = true;
        let mut final_size = 0;
        for w in 0..walks {
            let (end, report) = random_walk(&a, 1000 + w, steps).expect("walk");
            all_pass &= report.pass;
            final_size = end.rows();
            if let Some(msg) = report.divergence_message() {
                println!("  DIVERGED: {msg}");
            }
        }
        println!(
            "{name}: {walks} walks x {steps} moves -> {} (token {}, last walk ended at size {})",
            if all_pass { "invariant" } else { "BROKEN" },
            serialize(&random_walk(&a, 0, 0).unwrap().1.initial_package, true),
            final_size,
        );
    }
}
