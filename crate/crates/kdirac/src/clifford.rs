//! The real Clifford algebra with n anticommuting generators of square −1,
//! acting on itself as the spinor module.
//!
//! Basis blades are bit masks: bit i−1 set means generator e_i occurs. The
//! element type keeps a sparse map from blade to ℚ(√m) coefficient.

use crate::matrix::ExactMatrix;
use crate::scalar::FieldScalar;
use num::bigint::BigInt;
use num::rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Multiplies two basis blades. Returns the product blade and its sign.
///
/// The sign has one factor −1 per transposition needed to interleave the
/// generator lists and one factor −1 per shared generator, since each
/// generator squares to −1.
pub fn blade_mul(a: u64, b: u64) -> (u64, i32) {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let squares = (a & b).count_ones();
    let sign = if (swaps + squares).is_multiple_of(2) { 1 } else { -1 };
    (a ^ b, sign)
}

/// Writes a blade mask as a generator word, e.g. 0b101 -> "e1e3".
pub fn blade_name(mask: u64) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut out = String::new();
    for i in 0..64 {
        if mask & (1 << i) != 0 {
            out.push('e');
            out.push_str(&(i + 1).to_string());
        }
    }
    out
}

/// An element of the Clifford algebra on n generators over ℚ(√m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordElement {
    n: u16,
    m: u32,
    terms: BTreeMap<u64, FieldScalar>,
}

impl CliffordElement {
    pub fn zero(n: u16, m: u32) -> Self {
        CliffordElement {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_scalar(n: u16, c: FieldScalar) -> Self {
        let m = c.radicand();
        let mut out = Self::zero(n, m);
        out.insert(0, c);
        out
    }

    pub fn one(n: u16, m: u32) -> Self {
        Self::from_scalar(n, FieldScalar::one(m))
    }

    /// The i-th generator, 1-based.
    pub fn generator(n: u16, m: u32, i: u16) -> Self {
        assert!(1 <= i && i <= n, "generator index {i} out of 1..={n}");
        Self::basis_blade(n, m, 1u64 << (i - 1), FieldScalar::one(m))
    }

    /// c times the basis blade with the given mask.
    pub fn basis_blade(n: u16, m: u32, mask: u64, c: FieldScalar) -> Self {
        assert!(n < 64 && mask < (1u64 << n), "blade outside the algebra");
        let mut out = Self::zero(n, m);
        out.insert(mask, c);
        out
    }

    pub fn generators(&self) -> u16 {
        self.n
    }

    pub fn radicand(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|&mask| mask == 0)
    }

    /// The coefficient of a basis blade.
    pub fn coeff(&self, mask: u64) -> FieldScalar {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| FieldScalar::zero(self.m))
    }

    /// The coefficient of the empty blade.
    pub fn scalar_part(&self) -> FieldScalar {
        self.coeff(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &FieldScalar)> {
        self.terms.iter().map(|(&mask, c)| (mask, c))
    }

    fn insert(&mut self, mask: u64, c: FieldScalar) {
        assert_eq!(c.radicand(), self.m, "coefficient from a different field");
        if c.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, c);
        }
    }

    fn accumulate(&mut self, mask: u64, c: &FieldScalar) {
        let v = self.coeff(mask).checked_add(c).unwrap();
        self.insert(mask, v);
    }

    fn require_same_algebra(&self, other: &Self) {
        assert_eq!(self.n, other.n, "elements from different algebras");
        assert_eq!(self.m, other.m, "elements from different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.require_same_algebra(other);
        let mut out = self.clone();
        for (&mask, c) in &other.terms {
            out.accumulate(mask, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (&mask, c) in &self.terms {
            out.insert(mask, -c);
        }
        out
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        let mut out = Self::zero(self.n, self.m);
        if c.is_zero() {
            return out;
        }
        for (&mask, v) in &self.terms {
            out.insert(mask, v.checked_mul(c).unwrap());
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (&mask, v) in &self.terms {
            out.insert(mask, v.scale_rational(r));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.require_same_algebra(other);
        let mut out = Self::zero(self.n, self.m);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                let (mask, sign) = blade_mul(a, b);
                let mut c = ca.checked_mul(cb).unwrap();
                if sign < 0 {
                    c = -c;
                }
                out.accumulate(mask, &c);
            }
        }
        out
    }

    /// The matrix of left multiplication by self on the 2^n-dimensional
    /// spinor module, with blades ordered by mask in both row and column.
    pub fn left_mul_matrix(&self) -> ExactMatrix {
        let dim = 1usize << self.n;
        let mut out = ExactMatrix::zeros(dim, dim, self.m);
        for (&a, ca) in &self.terms {
            for b in 0..dim as u64 {
                let (mask, sign) = blade_mul(a, b);
                let c = if sign < 0 { -ca } else { ca.clone() };
                let prev = out.get(mask as usize, b as usize).checked_add(&c).unwrap();
                out.set(mask as usize, b as usize, prev);
            }
        }
        out
    }

    /// Multiplicative inverse, or `None` for zero and zero divisors.
    ///
    /// Uses the trace recursion U_1 = u, U_{k+1} = u(U_k − (N/k)⟨U_k⟩) with
    /// N = 2^⌈n/2⌉ steps; when U_N lands on a nonzero scalar the last shifted
    /// term divided by it is the inverse. Falls back to solving the
    /// left-multiplication system exactly when the recursion is inconclusive.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_scalar() {
            let c = self.scalar_part().checked_inv().ok()?;
            return Some(Self::from_scalar(self.n, c));
        }
        let steps = 1u64 << self.n.div_ceil(2);
        let mut u_k = self.clone();
        let mut shifted = self.clone();
        for k in 1..steps {
            let ratio = BigRational::new(BigInt::from(steps), BigInt::from(k));
            let c_k = Self::from_scalar(self.n, self.scalar_factor(&u_k, &ratio));
            shifted = u_k.sub(&c_k);
            u_k = self.mul(&shifted);
        }
        if u_k.is_scalar() {
            let det = u_k.scalar_part();
            if det.is_zero() {
                // u times a nonzero element is zero, so u is a zero divisor.
                return None;
            }
            let inv_det = det.checked_inv().unwrap();
            return Some(shifted.scale(&inv_det));
        }
        self.inverse_by_solve()
    }

    fn scalar_factor(&self, u: &Self, ratio: &BigRational) -> FieldScalar {
        u.scalar_part().scale_rational(ratio)
    }

    fn inverse_by_solve(&self) -> Option<Self> {
        let dim = 1usize << self.n;
        let mut rhs = vec![FieldScalar::zero(self.m); dim];
        rhs[0] = FieldScalar::one(self.m);
        let x = self.left_mul_matrix().solve(&rhs)?;
        let mut out = Self::zero(self.n, self.m);
        for (mask, c) in x.into_iter().enumerate() {
            out.insert(mask as u64, c);
        }
        Some(out)
    }
}

/// A vector Σ f_a e_a from its coordinates, indexed 1..=n in order.
pub fn vector_of(coords: &[FieldScalar]) -> CliffordElement {
    assert!(!coords.is_empty(), "vector needs at least one coordinate");
    let n = coords.len() as u16;
    let m = coords[0].radicand();
    let mut out = CliffordElement::zero(n, m);
    for (idx, c) in coords.iter().enumerate() {
        out = out.add(&CliffordElement::basis_blade(
            n,
            m,
            1u64 << idx,
            c.clone(),
        ));
    }
    out
}

/// Splits an n-tuple of spinors (s_1, ..., s_n) into its pure-spin and
/// twistor parts: with t = Σ_a e_a s_a, the spin part is −(1/n) e_a t and the
/// twistor part is the remainder, which satisfies Σ_a e_a (twist_a) = 0.
pub fn split_spinor_twistor(
    components: &[CliffordElement],
) -> (Vec<CliffordElement>, Vec<CliffordElement>) {
    let n = components.len();
    assert!(n > 0, "empty tuple");
    let gens = components[0].generators();
    assert_eq!(n, gens as usize, "tuple length must match generator count");
    let m = components[0].radicand();
    let mut tot = CliffordElement::zero(gens, m);
    for (idx, s) in components.iter().enumerate() {
        let e = CliffordElement::generator(gens, m, idx as u16 + 1);
        tot = tot.add(&e.mul(s));
    }
    let minus_inv_n = BigRational::new(BigInt::from(-1), BigInt::from(n as i64));
    let mut spin = Vec::with_capacity(n);
    let mut twist = Vec::with_capacity(n);
    for (idx, s) in components.iter().enumerate() {
        let e = CliffordElement::generator(gens, m, idx as u16 + 1);
        let sa = e.mul(&tot).scale_rational(&minus_inv_n);
        twist.push(s.sub(&sa));
        spin.push(sa);
    }
    (spin, twist)
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", blade_name(mask))?;
            } else {
                write!(f, "({})*{}", c, blade_name(mask))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(rng: &mut ChaCha8Rng, n: u16, m: u32) -> CliffordElement {
        let mut out = CliffordElement::zero(n, m);
        for mask in 0..(1u64 << n) {
            if rng.gen_bool(0.4) {
                let c = FieldScalar::from_int(rng.gen_range(-3..=3), m);
                out = out.add(&CliffordElement::basis_blade(n, m, mask, c));
            }
        }
        out
    }

    #[test]
    fn generator_relations_exhaustive() {
        for n in [4u16, 6] {
            let m = u32::from(n) + 2;
            for i in 1..=n {
                for j in 1..=n {
                    let ei = CliffordElement::generator(n, m, i);
                    let ej = CliffordElement::generator(n, m, j);
                    let anti = ei.mul(&ej).add(&ej.mul(&ei));
                    let expected = if i == j {
                        CliffordElement::from_scalar(n, FieldScalar::from_int(-2, m))
                    } else {
                        CliffordElement::zero(n, m)
                    };
                    assert_eq!(anti, expected, "relation failed at n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn blade_products_associative() {
        for a in 0u64..16 {
            for b in 0u64..16 {
                for c in 0u64..16 {
                    let (ab, s1) = blade_mul(a, b);
                    let (abc_left, s2) = blade_mul(ab, c);
                    let (bc, t1) = blade_mul(b, c);
                    let (abc_right, t2) = blade_mul(a, bc);
                    assert_eq!(abc_left, abc_right);
                    assert_eq!(s1 * s2, t1 * t2, "sign mismatch at {a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn sum_of_two_generators_squares_to_minus_two() {
        let n = 4;
        let m = 6;
        let s = CliffordElement::generator(n, m, 1).add(&CliffordElement::generator(n, m, 2));
        assert_eq!(
            s.mul(&s),
            CliffordElement::from_scalar(n, FieldScalar::from_int(-2, m))
        );
    }

    #[test]
    fn vector_square_is_minus_norm() {
        let m = 6;
        let coords = vec![
            FieldScalar::from_int(1, m),
            FieldScalar::sqrt_m(m),
            FieldScalar::from_int(2, m),
            FieldScalar::from_int(-3, m),
        ];
        let v = vector_of(&coords);
        let mut norm = FieldScalar::zero(m);
        for c in &coords {
            norm = norm.checked_add(&c.checked_mul(c).unwrap()).unwrap();
        }
        assert_eq!(v.mul(&v), CliffordElement::from_scalar(4, -norm));
    }

    #[test]
    fn left_mul_matrix_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (n, m) = (4u16, 6u32);
        assert_eq!(
            CliffordElement::one(n, m).left_mul_matrix(),
            ExactMatrix::identity(16, m)
        );
        for _ in 0..5 {
            let u = random_element(&mut rng, n, m);
            let v = random_element(&mut rng, n, m);
            assert_eq!(
                u.mul(&v).left_mul_matrix(),
                u.left_mul_matrix().mul(&v.left_mul_matrix())
            );
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [4u16, 6] {
            let m = u32::from(n) + 2;
            let one = CliffordElement::one(n, m);
            let mut found = 0;
            while found < 6 {
                let u = random_element(&mut rng, n, m);
                let Some(inv) = u.inverse() else { continue };
                assert_eq!(u.mul(&inv), one, "right inverse failed at n={n}");
                assert_eq!(inv.mul(&u), one, "left inverse failed at n={n}");
                found += 1;
            }
        }
    }

    #[test]
    fn generator_inverse_is_negation() {
        let e1 = CliffordElement::generator(4, 6, 1);
        assert_eq!(e1.inverse().unwrap(), e1.neg());
    }

    #[test]
    fn volume_blade_plus_one_is_a_zero_divisor() {
        let (n, m) = (4u16, 6u32);
        let vol = CliffordElement::basis_blade(n, m, 0b1111, FieldScalar::one(m));
        // The volume blade squares to +1 here, so 1 ± it annihilate each other.
        assert_eq!(vol.mul(&vol), CliffordElement::one(n, m));
        let u = CliffordElement::one(n, m).add(&vol);
        assert_eq!(u.inverse(), None);
        let v = CliffordElement::one(n, m).sub(&vol);
        assert!(u.mul(&v).is_zero());
    }

    #[test]
    fn spin_twistor_split_is_a_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (n, m) = (4u16, 6u32);
        let tuple: Vec<CliffordElement> =
            (0..n).map(|_| random_element(&mut rng, n, m)).collect();
        let (spin, twist) = split_spinor_twistor(&tuple);
        let mut traced = CliffordElement::zero(n, m);
        for (idx, t) in twist.iter().enumerate() {
            assert_eq!(spin[idx].add(t), tuple[idx], "split must reassemble");
            let e = CliffordElement::generator(n, m, idx as u16 + 1);
            traced = traced.add(&e.mul(t));
        }
        assert!(traced.is_zero(), "twistor part must be trace free");
        let (spin2, twist2) = split_spinor_twistor(&spin);
        for idx in 0..n as usize {
            assert_eq!(spin2[idx], spin[idx]);
            assert!(twist2[idx].is_zero());
        }
        let (spin3, twist3) = split_spinor_twistor(&twist);
        for idx in 0..n as usize {
            assert!(spin3[idx].is_zero());
            assert_eq!(twist3[idx], twist[idx]);
        }
    }

    proptest! {
        #[test]
        fn vectors_anticommute_to_inner_product(
            f in proptest::collection::vec(-3i64..=3, 4),
            g in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let m = 6;
            let fc: Vec<FieldScalar> = f.iter().map(|&v| FieldScalar::from_int(v, m)).collect();
            let gc: Vec<FieldScalar> = g.iter().map(|&v| FieldScalar::from_int(v, m)).collect();
            let vf = vector_of(&fc);
            let vg = vector_of(&gc);
            let mut dot = FieldScalar::zero(m);
            for (a, b) in fc.iter().zip(&gc) {
                dot = dot.checked_add(&a.checked_mul(b).unwrap()).unwrap();
            }
            let expected = CliffordElement::from_scalar(4, dot.scale_rational(
                &BigRational::from_integer(BigInt::from(-2))));
            prop_assert_eq!(vf.mul(&vg).add(&vg.mul(&vf)), expected);
        }
    }
}
