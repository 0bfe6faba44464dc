//! Invariant vector fields on the big cell in flat coordinates: the first-slot
//! fields xi_{i,mu}, the second-slot fields xi_{i,j}, their commutators, and
//! the Dirac combinations built from them.
//!
//! Run with: cargo run --example invariant_fields

use kdirac::clifford::CliffordElement;
use kdirac::flatmodel::{
    apply_dirac, apply_xi_first, apply_xi_second, coordinate_derivative, is_q_pullback,
    random_section, Poly, VarId,
};
use kdirac::scalar::FieldScalar;

fn main() {
    let k = 2;
    let n = 4;
    let m = 6;

    // A polynomial section: Clifford-algebra coefficients on monomials in the
    // matrix entries x[i,a] (first slot) and y[i,j] (second slot).
    let e1 = CliffordElement::generator(n, m, 1);
    let p = Poly::monomial(vec![(VarId::first(1, 2), 2)], e1.clone())
        .add(&Poly::monomial(
            vec![(VarId::first(2, 2), 1), (VarId::second(1, 2), 1)],
            CliffordElement::one(n, m),
        ));
    println!("p = {p}");
    println!("xi_(1,2) p = {}", apply_xi_first(1, 2, &p, k));
    println!("xi_(1,2)-second p = {}", apply_xi_second(1, 2, &p));

    // The commutator of two first-slot fields lands in the second slot:
    // [xi_{j,mu}, xi_{l,mu}] = (1/sqrt m) d/dy[j,l].
    let ab = apply_xi_first(1, 3, &apply_xi_first(2, 3, &p, k), k);
    let ba = apply_xi_first(2, 3, &apply_xi_first(1, 3, &p, k), k);
    let lhs = ab.sub(&ba);
    let rhs = coordinate_derivative(VarId::second(1, 2), &p)
        .scale(&FieldScalar::sqrt_multiple(1, m as i64, m));
    println!("commutator matches second-slot derivative: {}", lhs.sub(&rhs).is_zero());

    // Different first-slot columns commute outright.
    let ab = apply_xi_first(1, 1, &apply_xi_first(2, 3, &p, k), k);
    let ba = apply_xi_first(2, 3, &apply_xi_first(1, 1, &p, k), k);
    println!("mixed-column commutator vanishes:           {}", ab.sub(&ba).is_zero());

    // The slot-i Dirac operator contracts the xi fields with the generators.
    println!("D_1 p = {}", apply_dirac(1, &p, k));

    // Sections pulled back from the base use no second-slot variable; random
    // test sections can be drawn either way.
    let pullback = random_section(k, n, 2, 1, 7, true);
    let free = [p.clone()];
    println!("random pullback section is a pullback: {}", is_q_pullback(&pullback));
    println!("p is a pullback:                       {}", is_q_pullback(&free));
}
