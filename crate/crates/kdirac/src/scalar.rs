//! Exact arithmetic in the real quadratic field ℚ(√m).
//!
//! A [`FieldScalar`] is a + b√m with a, b exact rationals. The radicand m is
//! carried in every value and checked on every binary operation; mixing
//! values from different fields is a hard error rather than a coercion.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("radicand {0} must be at least 2")]
    RadicandTooSmall(u32),
    #[error("radicand {0} is a perfect square, so a + b\u{221a}{0} would collapse to a rational")]
    PerfectSquareRadicand(u32),
    #[error("mixed radicands {0} and {1} in one operation")]
    MixedRadicands(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

fn is_perfect_square(m: u32) -> bool {
    let r = (m as f64).sqrt().round() as u32;
    for c in r.saturating_sub(1)..=r + 1 {
        if c.checked_mul(c) == Some(m) {
            return true;
        }
    }
    false
}

/// Checks that m generates a genuine quadratic extension.
pub fn check_radicand(m: u32) -> Result<(), ScalarError> {
    if m < 2 {
        return Err(ScalarError::RadicandTooSmall(m));
    }
    if is_perfect_square(m) {
        return Err(ScalarError::PerfectSquareRadicand(m));
    }
    Ok(())
}

/// An element a + b√m of ℚ(√m). Representation is canonical: the pair
/// (a, b) of reduced rationals is unique for a given value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldScalar {
    a: BigRational,
    b: BigRational,
    m: u32,
}

impl FieldScalar {
    pub fn new(a: BigRational, b: BigRational, m: u32) -> Result<Self, ScalarError> {
        check_radicand(m)?;
        Ok(FieldScalar { a, b, m })
    }

    /// The zero of ℚ(√m). Panics on an invalid radicand.
    pub fn zero(m: u32) -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), m).expect("valid radicand")
    }

    /// The one of ℚ(√m). Panics on an invalid radicand.
    pub fn one(m: u32) -> Self {
        Self::new(BigRational::one(), BigRational::zero(), m).expect("valid radicand")
    }

    /// The element √m itself.
    pub fn sqrt_m(m: u32) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), m).expect("valid radicand")
    }

    /// Embeds an integer.
    pub fn from_int(v: i64, m: u32) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)), m)
    }

    /// Embeds the rational num/den.
    pub fn from_ratio(num: i64, den: i64, m: u32) -> Self {
        assert!(den != 0, "zero denominator");
        Self::rational(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            m,
        )
    }

    /// Embeds a rational as a + 0·√m.
    pub fn rational(a: BigRational, m: u32) -> Self {
        Self::new(a, BigRational::zero(), m).expect("valid radicand")
    }

    /// Builds (num/den)·√m.
    pub fn sqrt_multiple(num: i64, den: i64, m: u32) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            m,
        )
        .expect("valid radicand")
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The field conjugate a − b√m.
    pub fn conj(&self) -> Self {
        FieldScalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            m: self.m,
        }
    }

    /// The field norm a² − m·b², a rational. Zero only for the zero element
    /// (m is never a perfect square).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.m)) * &self.b * &self.b
    }

    fn require_same_field(&self, other: &Self) -> Result<(), ScalarError> {
        if self.m != other.m {
            Err(ScalarError::MixedRadicands(self.m, other.m))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.require_same_field(other)?;
        Ok(FieldScalar {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            m: self.m,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.require_same_field(other)?;
        Ok(FieldScalar {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            m: self.m,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.require_same_field(other)?;
        let m = BigRational::from_integer(BigInt::from(self.m));
        Ok(FieldScalar {
            a: &self.a * &other.a + m * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            m: self.m,
        })
    }

    /// Multiplicative inverse via the conjugate: 1/(a+b√m) = (a−b√m)/(a²−mb²).
    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        Ok(FieldScalar {
            a: &self.a / &n,
            b: -(&self.b / &n),
            m: self.m,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.require_same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    /// Multiplies by a plain rational.
    pub fn scale_rational(&self, r: &BigRational) -> Self {
        FieldScalar {
            a: &self.a * r,
            b: &self.b * r,
            m: self.m,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            m: self.m,
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            first = false;
        }
        if !self.b.is_zero() {
            if !first {
                if self.b < BigRational::zero() {
                    write!(f, " - {}*sqrt({})", -self.b.clone(), self.m)?;
                } else {
                    write!(f, " + {}*sqrt({})", self.b, self.m)?;
                }
            } else if self.b.is_one() {
                write!(f, "sqrt({})", self.m)?;
            } else if self.b == -BigRational::one() {
                write!(f, "-sqrt({})", self.m)?;
            } else {
                write!(f, "{}*sqrt({})", self.b, self.m)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WireScalar {
    a: String,
    b: String,
    m: u32,
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireScalar {
            a: self.a.to_string(),
            b: self.b.to_string(),
            m: self.m,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WireScalar::deserialize(d)?;
        let a = parse_rational(&w.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&w.b).map_err(serde::de::Error::custom)?;
        FieldScalar::new(a, b, w.m).map_err(serde::de::Error::custom)
    }
}

/// Parses "p" or "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    BigRational::from_str(s.trim()).map_err(|_| ScalarError::BadRational(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fs(a: i64, b: i64, m: u32) -> FieldScalar {
        FieldScalar::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
            m,
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let x = fs(1, 1, 6);
        let y = fs(1, -1, 6);
        assert_eq!(&x * &y, fs(-5, 0, 6));
    }

    #[test]
    fn rationalization() {
        let one = FieldScalar::one(6);
        let root = FieldScalar::sqrt_m(6);
        assert_eq!(&one / &root, FieldScalar::sqrt_multiple(1, 6, 6));
    }

    #[test]
    fn inverse_pair_at_m6() {
        // 1/(2*sqrt 6) times 2*sqrt 6 is 1.
        let half_inv = FieldScalar::one(6)
            .checked_div(&FieldScalar::sqrt_multiple(2, 1, 6))
            .unwrap();
        assert_eq!(&half_inv * &FieldScalar::sqrt_multiple(2, 1, 6), FieldScalar::one(6));
    }

    #[test]
    fn perfect_square_radicand_rejected() {
        assert_eq!(
            FieldScalar::new(BigRational::zero(), BigRational::zero(), 16),
            Err(ScalarError::PerfectSquareRadicand(16))
        );
        assert_eq!(check_radicand(1), Err(ScalarError::RadicandTooSmall(1)));
        assert!(check_radicand(6).is_ok());
        assert!(check_radicand(8).is_ok());
        assert!(check_radicand(10).is_ok());
    }

    #[test]
    fn mixed_radicands_error() {
        let x = fs(1, 0, 6);
        let y = fs(1, 0, 8);
        assert_eq!(
            x.checked_add(&y),
            Err(ScalarError::MixedRadicands(6, 8))
        );
    }

    #[test]
    fn division_by_zero_error() {
        let x = fs(3, 1, 6);
        assert_eq!(
            x.checked_div(&FieldScalar::zero(6)),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn json_round_trip() {
        let x = FieldScalar::new(
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
            BigRational::new(BigInt::from(7), BigInt::from(2)),
            8,
        )
        .unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"a":"-3/4","b":"7/2","m":8}"#);
        let back: FieldScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn display_forms() {
        assert_eq!(FieldScalar::zero(6).to_string(), "0");
        assert_eq!(fs(2, 0, 6).to_string(), "2");
        assert_eq!(fs(0, 1, 6).to_string(), "sqrt(6)");
        assert_eq!(fs(1, -2, 6).to_string(), "1 - 2*sqrt(6)");
    }

    fn arb_scalar(m: u32) -> impl Strategy<Value = FieldScalar> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(move |(an, ad, bn, bd)| {
            FieldScalar::new(
                BigRational::new(BigInt::from(an), BigInt::from(ad)),
                BigRational::new(BigInt::from(bn), BigInt::from(bd)),
                m,
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_scalar(6), y in arb_scalar(6), z in arb_scalar(6)) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &(-&x), FieldScalar::zero(6));
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
                prop_assert_eq!(&y * &y.checked_inv().unwrap(), FieldScalar::one(6));
            }
        }

        #[test]
        fn norm_multiplicative(x in arb_scalar(10), y in arb_scalar(10)) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }
    }
}
