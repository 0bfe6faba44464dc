//! The k = 2 operator sequence D1, D2, D3: printing the operator tables,
//! checking that consecutive compositions annihilate random sections, and the
//! cubic commutation identities behind the construction.
//!
//! Run with: cargo run --example complex_k2

use kdirac::flatmodel::{apply_dirac, apply_xi_second, random_section, Poly};
use kdirac::scalar::FieldScalar;
use kdirac::sequences::{compositions, Edition, OperatorSet};

fn main() {
    let n = 4;
    let m = 6;
    let set = OperatorSet::new(2, n, Edition::Given).unwrap();

    for index in 1..=set.len() {
        let def = set.op(index);
        println!("{} (order {}):", def.name, def.order());
        print!("{}", def.dump());
    }

    for comp in compositions(2) {
        let inputs = set.composition_inputs(&comp).len();
        let mut all_zero = true;
        for trial in 0..5 {
            let s = random_section(2, n, 3, inputs, trial, false);
            let out = set.apply_composition(&comp, &s).unwrap();
            all_zero &= out.iter().all(Poly::is_zero);
        }
        println!("{} on 5 random degree-3 sections: {}", comp.id, if all_zero { "exact zero" } else { "nonzero" });
    }

    // The sequence is a complex because of two cubic identities among the
    // slot Dirac operators; the defect is a second-slot field, which kills
    // pullbacks but matters on the full space.
    let p = &random_section(2, n, 3, 1, 42, false)[0];
    let d = |i: u16, q: &Poly| apply_dirac(i, q, 2);
    let defect = FieldScalar::sqrt_multiple(-2, m as i64, m);
    let lhs1 = d(1, &d(1, &d(2, p))).sub(&d(2, &d(1, &d(1, p))));
    let rhs1 = apply_xi_second(1, 2, &d(1, p)).scale(&defect);
    println!("D1 D1 D2 - D2 D1 D1 = -(2/sqrt m) xi_12 D1:  {}", lhs1.sub(&rhs1).is_zero());
    let lhs2 = d(1, &d(2, &d(2, p))).sub(&d(2, &d(2, &d(1, p))));
    let rhs2 = apply_xi_second(1, 2, &d(2, p)).scale(&defect);
    println!("D1 D2 D2 - D2 D2 D1 = -(2/sqrt m) xi_12 D2:  {}", lhs2.sub(&rhs2).is_zero());
}
