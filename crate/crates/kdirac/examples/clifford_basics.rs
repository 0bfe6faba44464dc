//! The Clifford algebra with n anticommuting generators squaring to -1,
//! with coefficients in Q(sqrt(n+2)).
//!
//! Run with: cargo run --example clifford_basics

use kdirac::clifford::{split_spinor_twistor, vector_of, CliffordElement};
use kdirac::scalar::FieldScalar;

fn main() {
    let n = 4;
    let m = 6;
    let e1 = CliffordElement::generator(n, m, 1);
    let e2 = CliffordElement::generator(n, m, 2);

    println!("e1 * e1           = {}", e1.mul(&e1));
    println!("e1 * e2           = {}", e1.mul(&e2));
    println!("e1 e2 + e2 e1     = {}", e1.mul(&e2).add(&e2.mul(&e1)));

    // Invertibility is decided exactly.  A nonzero vector is always
    // invertible; some non-scalar elements are genuine zero divisors.
    let v = vector_of(&[
        FieldScalar::from_int(1, m),
        FieldScalar::from_int(2, m),
        FieldScalar::zero(m),
        FieldScalar::sqrt_multiple(1, 1, m),
    ]);
    let inv = v.inverse().unwrap();
    println!("v                 = {v}");
    println!("v^-1              = {inv}");
    println!("v * v^-1          = {}", v.mul(&inv));

    let rotor_like = CliffordElement::one(n, m).add(&e1.mul(&e2));
    match rotor_like.inverse() {
        Some(u) => println!("(1 + e1 e2)^-1    = {u}"),
        None => println!("(1 + e1 e2)       has no inverse (zero divisor)"),
    }
    // The volume element squares to +1 at n = 4, so 1 + e1 e2 e3 e4
    // annihilates 1 - e1 e2 e3 e4.
    let volume = e1
        .mul(&e2)
        .mul(&CliffordElement::generator(n, m, 3))
        .mul(&CliffordElement::generator(n, m, 4));
    let divisor = CliffordElement::one(n, m).add(&volume);
    match divisor.inverse() {
        Some(u) => println!("(1 + e1e2e3e4)^-1 = {u}"),
        None => println!("1 + e1e2e3e4      has no inverse (zero divisor)"),
    }

    // Left multiplication by an element is a linear map on the 2^n basis
    // blades; its exact rank detects zero divisors too.
    println!(
        "rank of left mul by v:             {} of {}",
        v.left_mul_matrix().rank(),
        1 << n
    );
    println!(
        "rank of left mul by 1 + e1e2e3e4:  {} of {}",
        divisor.left_mul_matrix().rank(),
        1 << n
    );

    // An n-tuple of algebra elements splits into a pure-spin part and a
    // twistor part with vanishing Clifford contraction.
    let tuple: Vec<CliffordElement> = (1..=n)
        .map(|a| CliffordElement::generator(n, m, a).mul(&e1))
        .collect();
    let (spin, twist) = split_spinor_twistor(&tuple);
    let contract = |parts: &[CliffordElement]| {
        let mut tot = CliffordElement::zero(n, m);
        for (idx, s) in parts.iter().enumerate() {
            tot = tot.add(&CliffordElement::generator(n, m, idx as u16 + 1).mul(s));
        }
        tot
    };
    println!("contraction of the twistor part: {}", contract(&twist));
    println!("contraction of the spin part:    {}", contract(&spin));
}
