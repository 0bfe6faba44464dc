//! Weight combinatorics: tensor-product multiplicities for the adjoint-like
//! raise at positions (i, j), and the Casimir eigenvalue offsets that drive
//! the splitting-operator derivation.
//!
//! Run with: cargo run --example weights_and_multiplicities

use kdirac::weights::{
    casimir_alphas, dominant_integer_sweep, klimyk_multiplicity, raise_weight, young_symmetry_holds,
    Weight,
};

fn main() {
    // Multiplicity of the weight raised by one at slots i and j inside the
    // relevant tensor product.  It is 1 exactly when the raised weight is
    // again dominant, and 0 otherwise.
    let k = 3;
    for lambda in [Weight::from_ints(&[3, 1, 0]), Weight::from_ints(&[2, 1, 1])] {
        for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
            let mult = klimyk_multiplicity(&lambda, i, j, k).unwrap();
            let target = raise_weight(&lambda, i, j).unwrap();
            println!(
                "lambda={lambda} (i,j)=({i},{j}) -> target {target} ({}): multiplicity {mult}",
                if target.is_dominant() { "dominant" } else { "not dominant" },
            );
        }
    }

    // The same dichotomy holds across a whole sweep of dominant weights.
    let sweep = dominant_integer_sweep(k, 0, 5);
    let mut ones = 0;
    let mut zeros = 0;
    for lambda in &sweep {
        for i in 1..=k {
            for j in i + 1..=k {
                match klimyk_multiplicity(lambda, i, j, k).unwrap() {
                    1 => ones += 1,
                    0 => zeros += 1,
                    other => println!("unexpected multiplicity {other} at {lambda}"),
                }
            }
        }
    }
    println!("sweep over {} weights: {ones} raises with multiplicity 1, {zeros} with 0", sweep.len());

    // Casimir eigenvalue offsets for the k = 2 derivation weight at n = 6.
    // The last one, alpha_ij, vanishes exactly when the weight satisfies the
    // index symmetry condition; that is what makes the derivation close.
    let n = 6;
    let lambda = Weight::half(&[7, 5]);
    let alphas = casimir_alphas(&lambda, n, 2, 1, 2).unwrap();
    println!("weight {lambda} at n={n}:");
    for (name, value) in ["alpha_i^S", "alpha_j^S", "alpha_i^T", "alpha_j^T", "alpha_ij"]
        .iter()
        .zip(alphas.chain_order())
    {
        println!("  {name} = {value}");
    }
    println!(
        "symmetry condition holds: {}",
        young_symmetry_holds(&lambda, n, 1, 2)
    );

    // An integer weight can have alpha_ij = 0 without the symmetry condition:
    // the condition needs half-integer entries at even n.
    let counterexample = Weight::from_ints(&[3, 1]);
    let a = casimir_alphas(&counterexample, 4, 2, 1, 2).unwrap();
    println!(
        "weight {counterexample} at n=4: alpha_ij = {}, symmetry condition holds: {}",
        a.alpha_ij,
        young_symmetry_holds(&counterexample, 4, 1, 2)
    );
}
