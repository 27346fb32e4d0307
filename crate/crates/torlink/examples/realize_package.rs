//! Realize token packages as canonical matrices with their symbolic
//! module descriptors.
//!
//! ```bash
//! cargo run --example realize_package
//! ```

use torlink::canon::{canon, serialize};
use torlink::dictionary::realize;
use torlink::exact::IntMatrix;

fn main() {
    let samples: Vec<(&str, IntMatrix)> = vec![
        ("(3)", IntMatrix::from_rows(&[vec![3]])),
        ("hyperbolic mod 3", IntMatrix::from_rows(&[vec![0, 3], vec![3, 0]])),
        ("2x2 zero", IntMatrix::zeros(2, 2)),
        ("hyperbolic mod 2", IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]])),
        ("diag(4,3)", IntMatrix::from_rows(&[vec![4, 0], vec![0, 3]])),
        ("(-25)", IntMatrix::from_rows(&[vec![-25]])),
    ];

    for (name, a) in samples {
        let t = canon(&a).expect("canon");
        let r = realize(&t).expect("realize");
        println!("{name}: token {}", serialize(&t, true));
        println!("  canonical matrix B(T):");
        for i in 0..r.matrix.rows() {
            let row: Vec<String> = (0..r.matrix.cols())
                .map(|j| r.matrix[(i, j)].to_string())
                .collect();
            println!("    [{}]", row.join(", "));
        }
        println!("  module {}", r.module_name());
        let factors: Vec<String> = r
            .factors
            .iter()
            .map(|f| format!("{}[{}]", f.label.display(), f.shift))
            .collect();
        println!("  tensor factors: {}", factors.join(" (x) "));
        println!();
    }
}
