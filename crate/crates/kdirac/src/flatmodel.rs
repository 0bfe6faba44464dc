//! Polynomial sections on the big affine cell, the invariant vector fields ξ,
//! and the row Dirac operators ∂_i built from them.
//!
//! Variables come in two slots: x[i,α] (row i ≤ k, column α ≤ n) and the
//! antisymmetric second-slot variables y[i,j] stored with i < j. Coefficients
//! of polynomials are Clifford algebra elements.

use crate::clifford::CliffordElement;
use crate::scalar::FieldScalar;
use num::bigint::BigInt;
use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A coordinate on the affine cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarId {
    /// x[row, col]: first-slot variable, row ≤ k, col ≤ n.
    First { row: u16, col: u16 },
    /// y[row, col]: second-slot variable, canonical form row < col.
    Second { row: u16, col: u16 },
}

impl VarId {
    pub fn first(row: u16, col: u16) -> Self {
        assert!(row >= 1 && col >= 1);
        VarId::First { row, col }
    }

    /// Second-slot variable y[i,j]; callers must pass i < j.
    pub fn second(row: u16, col: u16) -> Self {
        assert!(row >= 1 && row < col, "second-slot variables need i < j");
        VarId::Second { row, col }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::First { row, col } => write!(f, "x[{row},{col}]"),
            VarId::Second { row, col } => write!(f, "y[{row},{col}]"),
        }
    }
}

/// A monomial: sorted list of (variable, positive exponent).
pub type Mono = Vec<(VarId, u32)>;

/// Renders a monomial like "x[1,2]^2*y[1,2]"; the empty monomial is "1".
pub fn mono_to_string(mono: &Mono) -> String {
    if mono.is_empty() {
        return "1".to_string();
    }
    mono.iter()
        .map(|(v, e)| {
            if *e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A polynomial in the cell coordinates with Clifford-element coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    n: u16,
    m: u32,
    terms: BTreeMap<Mono, CliffordElement>,
}

impl Poly {
    pub fn zero(n: u16, m: u32) -> Self {
        Poly {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CliffordElement) -> Self {
        let mut out = Poly::zero(c.generators(), c.radicand());
        out.insert(Vec::new(), c);
        out
    }

    /// A single monomial with the given coefficient.
    pub fn monomial(mono: Mono, c: CliffordElement) -> Self {
        let mut out = Poly::zero(c.generators(), c.radicand());
        debug_assert!(mono.windows(2).all(|w| w[0].0 < w[1].0), "unsorted monomial");
        out.insert(mono, c);
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

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CliffordElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Mono) -> CliffordElement {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| CliffordElement::zero(self.n, self.m))
    }

    fn insert(&mut self, mono: Mono, c: CliffordElement) {
        if c.is_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, c);
        }
    }

    fn accumulate(&mut self, mono: &Mono, c: &CliffordElement) {
        let v = self.coeff(mono).add(c);
        self.insert(mono.clone(), v);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.m), (other.n, other.m), "mixed contexts");
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.accumulate(mono, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.n, self.m);
        for (mono, c) in &self.terms {
            out.insert(mono.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        let mut out = Poly::zero(self.n, self.m);
        if s.is_zero() {
            return out;
        }
        for (mono, c) in &self.terms {
            out.insert(mono.clone(), c.scale(s));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let mut out = Poly::zero(self.n, self.m);
        for (mono, c) in &self.terms {
            out.insert(mono.clone(), c.scale_rational(r));
        }
        out
    }

    /// Left multiplication of every coefficient by a Clifford element.
    pub fn clifford_mul_left(&self, u: &CliffordElement) -> Self {
        let mut out = Poly::zero(self.n, self.m);
        for (mono, c) in &self.terms {
            out.insert(mono.clone(), u.mul(c));
        }
        out
    }

    /// Multiplies by a single variable.
    pub fn mul_var(&self, var: VarId) -> Self {
        let mut out = Poly::zero(self.n, self.m);
        for (mono, c) in &self.terms {
            let mut md = mono.clone();
            match md.iter_mut().find(|(v, _)| *v == var) {
                Some((_, e)) => *e += 1,
                None => {
                    md.push((var, 1));
                    md.sort_by_key(|e| e.0);
                }
            }
            out.insert(md, c.clone());
        }
        out
    }

    /// Total degree of the highest monomial, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|mono| mono.iter().map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// True when no second-slot variable occurs in any monomial.
    pub fn is_q_pullback(&self) -> bool {
        self.terms
            .keys()
            .all(|mono| mono.iter().all(|(v, _)| matches!(v, VarId::First { .. })))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) {}", c, mono_to_string(mono))?;
        }
        Ok(())
    }
}

/// Formal partial derivative with respect to one coordinate.
pub fn coordinate_derivative(var: VarId, p: &Poly) -> Poly {
    let mut out = Poly::zero(p.generators(), p.radicand());
    for (mono, c) in p.terms() {
        let Some(pos) = mono.iter().position(|(v, _)| *v == var) else {
            continue;
        };
        let e = mono[pos].1;
        let mut md = mono.clone();
        if e == 1 {
            md.remove(pos);
        } else {
            md[pos].1 = e - 1;
        }
        let scaled = c.scale_rational(&BigRational::from_integer(BigInt::from(e)));
        out.accumulate(&md, &scaled);
    }
    out
}

/// Derivative along ∂_{ij} resolved through the antisymmetry convention:
/// ∂_{ij} for i < j is the plain derivative, for i > j it is −∂_{ji}, and
/// ∂_{ii} ≡ 0.
fn second_slot_derivative(i: u16, j: u16, p: &Poly) -> Poly {
    if i == j {
        return Poly::zero(p.generators(), p.radicand());
    }
    if i < j {
        coordinate_derivative(VarId::second(i, j), p)
    } else {
        coordinate_derivative(VarId::second(j, i), p).neg()
    }
}

/// The first-slot invariant field: ξ_{X_{iμ}} = ∂_{iμ} − (1/(2√m)) Σ_{l≠i} x_{lμ} ∂_{il}.
pub fn apply_xi_first(i: u16, mu: u16, p: &Poly, k: u16) -> Poly {
    let m = p.radicand();
    let mut out = coordinate_derivative(VarId::first(i, mu), p);
    // 1/(2√m) = √m/(2m)
    let half = FieldScalar::one(m)
        .checked_div(&FieldScalar::sqrt_multiple(2, 1, m))
        .unwrap();
    for l in 1..=k {
        if l == i {
            continue;
        }
        let dp = second_slot_derivative(i, l, p);
        if dp.is_zero() {
            continue;
        }
        let t = dp.mul_var(VarId::first(l, mu));
        out = out.sub(&t.scale(&half));
    }
    out
}

/// The second-slot invariant field ξ_{X_{ij}} = ∂_{ij}, i < j.
pub fn apply_xi_second(i: u16, j: u16, p: &Poly) -> Poly {
    assert!(i < j, "second-slot field needs i < j");
    coordinate_derivative(VarId::second(i, j), p)
}

/// The row Dirac operator ∂_i = Σ_α ε_α ξ_{X_{iα}}.
pub fn apply_dirac(i: u16, p: &Poly, k: u16) -> Poly {
    let (n, m) = (p.generators(), p.radicand());
    let mut out = Poly::zero(n, m);
    for alpha in 1..=n {
        let t = apply_xi_first(i, alpha, p, k);
        if t.is_zero() {
            continue;
        }
        out = out.add(&t.clifford_mul_left(&CliffordElement::generator(n, m, alpha)));
    }
    out
}

/// True when no component depends on a second-slot variable.
pub fn is_q_pullback(components: &[Poly]) -> bool {
    components.iter().all(|p| p.is_q_pullback())
}

/// Reproducible random polynomial sections.
///
/// Each component draws a few monomials over a small pool of variables so
/// that squared variables actually occur, with sparse small-integer Clifford
/// coefficients.
pub fn random_section(
    k: u16,
    n: u16,
    degree: u32,
    components: usize,
    seed: u64,
    q_pullback: bool,
) -> Vec<Poly> {
    let m = u32::from(n) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars: Vec<VarId> = Vec::new();
    for i in 1..=k {
        for a in 1..=n {
            vars.push(VarId::first(i, a));
        }
    }
    if !q_pullback {
        for i in 1..=k {
            for j in i + 1..=k {
                vars.push(VarId::second(i, j));
            }
        }
    }
    let mut out = Vec::with_capacity(components);
    for _ in 0..components {
        let mut p = Poly::zero(n, m);
        // Small variable pool per component so powers show up at low degree.
        let pool_size = rng.gen_range(2..=3.min(vars.len()));
        let mut pool = Vec::with_capacity(pool_size);
        while pool.len() < pool_size {
            let v = vars[rng.gen_range(0..vars.len())];
            if !pool.contains(&v) {
                pool.push(v);
            }
        }
        let monomials = rng.gen_range(2..=4);
        for _ in 0..monomials {
            let d = rng.gen_range(0..=degree);
            let mut mono_map: BTreeMap<VarId, u32> = BTreeMap::new();
            for _ in 0..d {
                let v = pool[rng.gen_range(0..pool.len())];
                *mono_map.entry(v).or_insert(0) += 1;
            }
            let mono: Mono = mono_map.into_iter().collect();
            let mut coeff = CliffordElement::zero(n, m);
            for _ in 0..rng.gen_range(1..=3) {
                let mask = rng.gen_range(0..(1u64 << n));
                let mut v = rng.gen_range(-3i64..=3);
                if v == 0 {
                    v = 1;
                }
                coeff = coeff.add(&CliffordElement::basis_blade(
                    n,
                    m,
                    mask,
                    FieldScalar::from_int(v, m),
                ));
            }
            if !coeff.is_zero() {
                p = p.add(&Poly::monomial(mono, coeff));
            }
        }
        out.push(p);
    }
    out
}
