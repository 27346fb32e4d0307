//! Exact linear algebra under the hood: Smith normal form with
//! transformation matrices, saturated kernels, and linking values.
//!
//! ```bash
//! cargo run --example smith_and_linking
//! ```

use num_bigint::BigInt;
use torlink::exact::{kernel_basis, smith_normal_form, IntMatrix};
use torlink::linkform::{discriminant, linking_value, split_free_part};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, -2, 4], vec![-2, 6, 0], vec![4, 0, 12]]);
    println!("A =\n{a}");

    let s = smith_normal_form(&a).unwrap();
    println!("U A V = D with D =\n{}", s.d);
    println!("U =\n{}", s.u);
    println!("|det U| = {}", s.u.det().unwrap());

    let k = kernel_basis(&a).unwrap();
    println!("kernel rank {}", k.cols());

    let (b1, a_red, _p) = split_free_part(&a).unwrap();
    println!("b1 = {b1}, reduced block is {}x{}", a_red.rows(), a_red.cols());

    let disc = discriminant(&a).unwrap();
    println!(
        "invariant factors > 1: {:?}",
        disc.invariant_factors
            .iter()
            .map(BigInt::to_string)
            .collect::<Vec<_>>()
    );
    for i in 0..disc.gram.dim() {
        for j in 0..disc.gram.dim() {
            print!("  lambda(g{i},g{j}) = {}", disc.gram.entry(i, j));
        }
        println!();
    }

    // Direct linking values on the reduced block.
    let e1: Vec<BigInt> = (0..a_red.rows())
        .map(|i| BigInt::from(u8::from(i == 0)))
        .collect();
    println!(
        "lambda(e1, e1) on the reduced block = {}",
        linking_value(&a_red, &e1, &e1).unwrap()
    );
}
