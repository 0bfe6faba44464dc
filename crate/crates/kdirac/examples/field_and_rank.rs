//! Exact arithmetic in Q(sqrt m) and exact ranks of matrices over it.
//!
//! Run with: cargo run --example field_and_rank

use kdirac::matrix::ExactMatrix;
use kdirac::scalar::FieldScalar;

fn main() {
    // Scalars live in Q(sqrt 6): a + b*sqrt(6) with rational a, b.
    let m = 6;
    let x = FieldScalar::from_ratio(1, 3, m);
    let r = FieldScalar::sqrt_multiple(1, 2, m);
    let y = x.checked_add(&r).unwrap();
    println!("x       = {x}");
    println!("y       = {y}");
    println!("y * y   = {}", y.checked_mul(&y).unwrap());
    println!("conj(y) = {}", y.conj());
    println!("norm(y) = {} (rational, = y * conj(y))", y.norm());
    println!("1/y     = {}", y.checked_inv().unwrap());

    // Scalars from different fields refuse to mix.
    let other = FieldScalar::from_int(1, 8);
    println!("mixing radicands: {:?}", y.checked_add(&other).unwrap_err());

    // Rank is computed by fraction-free elimination, so it is exact: this
    // matrix has rank 2 even though its entries are irrational.
    let rows = vec![
        vec![y.clone(), x.clone(), y.checked_add(&x).unwrap()],
        vec![r.clone(), FieldScalar::one(m), r.checked_add(&FieldScalar::one(m)).unwrap()],
        vec![FieldScalar::zero(m), FieldScalar::zero(m), FieldScalar::zero(m)],
    ];
    let a = ExactMatrix::from_rows(rows, m);
    println!("rank of a 3x3 with a dependent column and a zero row: {}", a.rank());

    // Exact linear solve over the field.
    let b = ExactMatrix::from_rows(
        vec![
            vec![FieldScalar::from_int(2, m), FieldScalar::sqrt_m(m)],
            vec![FieldScalar::sqrt_m(m), FieldScalar::from_int(4, m)],
        ],
        m,
    );
    let rhs = [FieldScalar::one(m), FieldScalar::zero(m)];
    let sol = b.solve(&rhs).unwrap();
    println!("solve [[2, sqrt6], [sqrt6, 4]] v = [1, 0]:");
    for (i, v) in sol.iter().enumerate() {
        println!("  v[{i}] = {v}");
    }
}
