//! Weight arithmetic for 𝔰𝔩(k): dominance, the (i,j) raise, the Young-row
//! symmetry condition, tensor-product multiplicities by the signed
//! weight-translate count, and the Casimir eigenvalue differences α.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("indices must satisfy 1 <= i < j <= k, got i={i} j={j} k={k}")]
    BadIndexPair { i: usize, j: usize, k: usize },
    #[error("weight {0} is not dominant: pairwise differences must be nonnegative integers")]
    NotDominant(String),
    #[error("need even n with n >= 2k >= 4, got n={n} k={k}")]
    BadParameters { n: u16, k: usize },
    #[error("cannot parse weight {0:?}: expected comma-separated rationals like 5/2,3/2")]
    BadWeightString(String),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A weight (λ_1, …, λ_k) with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    entries: Vec<BigRational>,
}

impl Weight {
    pub fn new(entries: Vec<BigRational>) -> Self {
        assert!(!entries.is_empty(), "weight needs at least one entry");
        Weight { entries }
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&v| rat(v)).collect())
    }

    /// Builds ½(numerators) from integer doubles, e.g. half(&[5,3]) = (5/2, 3/2).
    pub fn half(numerators: &[i64]) -> Self {
        Self::new(
            numerators
                .iter()
                .map(|&v| BigRational::new(BigInt::from(v), BigInt::from(2)))
                .collect(),
        )
    }

    /// Parses a comma-separated list of rationals, e.g. "5/2,3/2".
    pub fn parse(text: &str) -> Result<Self, WeightError> {
        let entries: Result<Vec<BigRational>, _> = text
            .split(',')
            .map(|p| BigRational::from_str(p.trim()))
            .collect();
        match entries {
            Ok(v) if !v.is_empty() => Ok(Self::new(v)),
            _ => Err(WeightError::BadWeightString(text.to_string())),
        }
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// 1-based entry access.
    pub fn entry(&self, i: usize) -> &BigRational {
        &self.entries[i - 1]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// λ is dominant iff λ_a − λ_b is a nonnegative integer for all a < b.
    pub fn is_dominant(&self) -> bool {
        for a in 0..self.entries.len() {
            for b in a + 1..self.entries.len() {
                let diff = &self.entries[a] - &self.entries[b];
                if !diff.is_integer() || diff.is_negative() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, e) in self.entries.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn check_pair(i: usize, j: usize, k: usize) -> Result<(), WeightError> {
    if 1 <= i && i < j && j <= k {
        Ok(())
    } else {
        Err(WeightError::BadIndexPair { i, j, k })
    }
}

/// λ_{(ij)}: adds exactly 1 at positions i and j (1-based, i < j).
pub fn raise_weight(lambda: &Weight, i: usize, j: usize) -> Result<Weight, WeightError> {
    check_pair(i, j, lambda.k())?;
    let mut entries = lambda.entries.clone();
    entries[i - 1] += BigRational::one();
    entries[j - 1] += BigRational::one();
    Ok(Weight::new(entries))
}

/// The row-symmetry condition: λ_j − ½(n−1) = i−1 and λ_i − ½(n−1) = j−1.
pub fn young_symmetry_holds(lambda: &Weight, n: u16, i: usize, j: usize) -> bool {
    assert!(1 <= i && i < j && j <= lambda.k(), "need 1 <= i < j <= k");
    let shift = BigRational::new(BigInt::from(i64::from(n) - 1), BigInt::from(2));
    lambda.entry(j) - &shift == rat(i as i64 - 1) && lambda.entry(i) - &shift == rat(j as i64 - 1)
}

/// The five Casimir eigenvalue differences attached to (λ, n, k, i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSet {
    pub alpha_i_s: BigRational,
    pub alpha_j_s: BigRational,
    pub alpha_i_t: BigRational,
    pub alpha_j_t: BigRational,
    pub alpha_ij: BigRational,
}

impl AlphaSet {
    /// The factors in the order the quintic splitting chain applies them.
    pub fn chain_order(&self) -> [&BigRational; 5] {
        [
            &self.alpha_i_s,
            &self.alpha_j_s,
            &self.alpha_i_t,
            &self.alpha_j_t,
            &self.alpha_ij,
        ]
    }
}

impl fmt::Display for AlphaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha_i_S={} alpha_j_S={} alpha_i_T={} alpha_j_T={} alpha_ij={}",
            self.alpha_i_s, self.alpha_j_s, self.alpha_i_t, self.alpha_j_t, self.alpha_ij
        )
    }
}

/// Computes the AlphaSet; everything is divided by n + 2k − 2.
pub fn casimir_alphas(
    lambda: &Weight,
    n: u16,
    k: usize,
    i: usize,
    j: usize,
) -> Result<AlphaSet, WeightError> {
    if lambda.k() != k || !n.is_multiple_of(2) || (n as usize) < 2 * k || k < 2 {
        return Err(WeightError::BadParameters { n, k });
    }
    check_pair(i, j, k)?;
    let denom = rat(i64::from(n) + 2 * k as i64 - 2);
    let li = lambda.entry(i).clone();
    let lj = lambda.entry(j).clone();
    let two = rat(2);
    let alpha_i_s = &two * (&lj - &li) / &denom;
    let alpha_j_s = -alpha_i_s.clone();
    let alpha_i_t = (&two * (&lj - &li) - rat(i64::from(n))) / &denom;
    let alpha_j_t = (&two * (&li - &lj) - rat(i64::from(n))) / &denom;
    let alpha_ij = (-&two * &li - &two * &lj
        + rat(2 * i64::from(n) + 2 * i as i64 + 2 * j as i64 - 6))
        / &denom;
    Ok(AlphaSet {
        alpha_i_s,
        alpha_j_s,
        alpha_i_t,
        alpha_j_t,
        alpha_ij,
    })
}

/// Sorts a vector into strictly decreasing order, returning the sign of the
/// sorting permutation, or `None` when two entries coincide.
pub fn weyl_normalize(v: &[BigRational]) -> Option<(Vec<BigRational>, i32)> {
    let mut out = v.to_vec();
    let mut sign = 1;
    // Insertion sort; each adjacent swap flips the sign.
    for a in 1..out.len() {
        let mut b = a;
        while b > 0 && out[b - 1] < out[b] {
            out.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    for w in out.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((out, sign))
}

/// Multiplicity of the raised weight λ_{(ij)} in λ ⊗ Λ²(standard), by the
/// signed count of translate weights σ_{αβ} = e_α + e_β with
/// [σ + λ + ρ] = λ_{(ij)} + ρ, where ρ = (k−1, …, 1, 0).
pub fn klimyk_multiplicity(
    lambda: &Weight,
    i: usize,
    j: usize,
    k: usize,
) -> Result<u64, WeightError> {
    if lambda.k() != k {
        return Err(WeightError::BadParameters { n: 0, k });
    }
    check_pair(i, j, k)?;
    if !lambda.is_dominant() {
        return Err(WeightError::NotDominant(lambda.to_string()));
    }
    // Shift all entries by −λ_k so the weight becomes a nonnegative integer
    // vector; the formula only ever compares differences.
    let shift = lambda.entry(k).clone();
    let base: Vec<BigRational> = lambda.entries.iter().map(|e| e - &shift).collect();
    let rho: Vec<BigRational> = (0..k).map(|p| rat((k - 1 - p) as i64)).collect();
    let mut target: Vec<BigRational> = base
        .iter()
        .zip(&rho)
        .map(|(l, r)| l + r)
        .collect();
    target[i - 1] += BigRational::one();
    target[j - 1] += BigRational::one();
    let mut total: i64 = 0;
    for alpha in 0..k {
        for beta in alpha + 1..k {
            let mut v: Vec<BigRational> = base
                .iter()
                .zip(&rho)
                .map(|(l, r)| l + r)
                .collect();
            v[alpha] += BigRational::one();
            v[beta] += BigRational::one();
            if let Some((sorted, sign)) = weyl_normalize(&v) {
                if sorted == target {
                    total += i64::from(sign);
                }
            }
        }
    }
    assert!(total >= 0, "signed multiplicity count came out negative");
    Ok(total as u64)
}

/// All dominant weights with integer entries in [lo, hi], weakly decreasing.
pub fn dominant_integer_sweep(k: usize, lo: i64, hi: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if cur.len() == k {
            out.push(Weight::from_ints(cur));
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for v in (lo..=top).rev() {
            cur.push(v);
            rec(k, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(k, lo, hi, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use proptest::prelude::*;

    #[test]
    fn raise_adds_one_at_both_positions() {
        let w = Weight::from_ints(&[2, 1, 0]);
        assert_eq!(raise_weight(&w, 1, 2).unwrap(), Weight::from_ints(&[3, 2, 0]));
        let lam2 = Weight::half(&[5, 3]);
        assert_eq!(raise_weight(&lam2, 1, 2).unwrap(), Weight::half(&[7, 5]));
        assert_eq!(
            raise_weight(&w, 2, 2),
            Err(WeightError::BadIndexPair { i: 2, j: 2, k: 3 })
        );
    }

    #[test]
    fn raise_preserves_dominance_on_sweep() {
        for lambda in dominant_integer_sweep(3, 0, 4) {
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                let raised = raise_weight(&lambda, i, j).unwrap();
                let manual = {
                    let mut e: Vec<BigRational> = lambda.entries().to_vec();
                    e[i - 1] += BigRational::one();
                    e[j - 1] += BigRational::one();
                    e.windows(2).all(|w| w[0] >= w[1])
                };
                assert_eq!(raised.is_dominant(), manual);
            }
        }
    }

    #[test]
    fn young_condition_examples() {
        assert!(young_symmetry_holds(&Weight::half(&[5, 3]), 4, 1, 2));
        assert!(young_symmetry_holds(&Weight::half(&[7, 5]), 6, 1, 2));
        // k = 3 with λ = ½(n+3, n+1, n−1): the condition singles out (1,3).
        let lam3 = Weight::half(&[9, 7, 5]);
        assert!(young_symmetry_holds(&lam3, 6, 1, 3));
        assert!(!young_symmetry_holds(&lam3, 6, 1, 2));
        assert!(!young_symmetry_holds(&lam3, 6, 2, 3));
        // Constant weight ½(n−1,…): the j-side demands j−1 > 0.
        let flat = Weight::half(&[3, 3]);
        assert!(!young_symmetry_holds(&flat, 4, 1, 2));
    }

    #[test]
    fn alpha_values_for_the_k2_weights() {
        let a = casimir_alphas(&Weight::half(&[5, 3]), 4, 2, 1, 2).unwrap();
        assert_eq!(a.alpha_i_s, BigRational::new(BigInt::from(-1), BigInt::from(3)));
        assert_eq!(a.alpha_j_s, BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(a.alpha_i_t, rat(-1));
        assert_eq!(a.alpha_j_t, BigRational::new(BigInt::from(-1), BigInt::from(3)));
        assert!(a.alpha_ij.is_zero());

        let b = casimir_alphas(&Weight::half(&[7, 5]), 6, 2, 1, 2).unwrap();
        assert_eq!(b.alpha_i_s, BigRational::new(BigInt::from(-1), BigInt::from(4)));
        assert_eq!(b.alpha_j_s, BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(b.alpha_i_t, rat(-1));
        assert_eq!(b.alpha_j_t, BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert!(b.alpha_ij.is_zero());
    }

    #[test]
    fn equal_entries_kill_the_s_alphas() {
        let a = casimir_alphas(&Weight::from_ints(&[3, 3]), 4, 2, 1, 2).unwrap();
        assert!(a.alpha_i_s.is_zero());
        assert!(a.alpha_j_s.is_zero());
    }

    #[test]
    fn parameter_validation() {
        let w = Weight::from_ints(&[1, 0]);
        assert!(casimir_alphas(&w, 5, 2, 1, 2).is_err());
        assert!(casimir_alphas(&w, 2, 2, 1, 2).is_err());
        assert!(casimir_alphas(&w, 4, 2, 2, 1).is_err());
        assert_eq!(
            klimyk_multiplicity(&Weight::from_ints(&[1, 2]), 1, 2, 2),
            Err(WeightError::NotDominant("(1, 2)".to_string()))
        );
        assert!(klimyk_multiplicity(&Weight::half(&[5, 4]), 1, 2, 2).is_err());
    }

    #[test]
    fn young_implies_alpha_ij_zero() {
        // Wherever the symmetry condition holds, the α_ij difference is 0.
        for k in [2usize, 3, 4] {
            let n = (2 * k) as u16;
            for mu in dominant_integer_sweep(k, 0, 5) {
                // Shift into the half-integer family where the condition can hold.
                let shifted = Weight::new(
                    mu.entries()
                        .iter()
                        .map(|e| e + BigRational::new(BigInt::from(i64::from(n) - 1), BigInt::from(2)))
                        .collect(),
                );
                for i in 1..=k {
                    for j in i + 1..=k {
                        if young_symmetry_holds(&shifted, n, i, j) {
                            let a = casimir_alphas(&shifted, n, k, i, j).unwrap();
                            assert!(a.alpha_ij.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_one_on_small_sweep() {
        for k in [2usize, 3] {
            for lambda in dominant_integer_sweep(k, 0, 3) {
                for i in 1..=k {
                    for j in i + 1..=k {
                        let mult = klimyk_multiplicity(&lambda, i, j, k).unwrap();
                        let target_dominant = raise_weight(&lambda, i, j).unwrap().is_dominant();
                        assert_eq!(mult, u64::from(target_dominant), "λ={lambda} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(
            klimyk_multiplicity(&Weight::from_ints(&[2, 1, 0]), 1, 3, 3).unwrap(),
            1
        );
        assert_eq!(
            klimyk_multiplicity(&Weight::from_ints(&[0, 0]), 1, 2, 2).unwrap(),
            1
        );
    }

    proptest! {
        #[test]
        fn normalizer_sign_matches_bubble_parity(v in proptest::collection::vec(-20i64..=20, 2..6)) {
            let entries: Vec<BigRational> = v.iter().map(|&x| rat(x)).collect();
            match weyl_normalize(&entries) {
                None => {
                    let mut s = v.clone();
                    s.sort_unstable();
                    prop_assert!(s.windows(2).any(|w| w[0] == w[1]));
                }
                Some((sorted, sign)) => {
                    let mut expect = entries.clone();
                    let mut swaps = 0;
                    // Bubble sort into decreasing order, counting transpositions.
                    for a in 0..expect.len() {
                        for b in 0..expect.len() - 1 - a {
                            if expect[b] < expect[b + 1] {
                                expect.swap(b, b + 1);
                                swaps += 1;
                            }
                        }
                    }
                    prop_assert_eq!(&sorted, &expect);
                    prop_assert_eq!(sign, if swaps % 2 == 0 { 1 } else { -1 });
                    prop_assert!(sorted.windows(2).all(|w| w[0] > w[1]));
                }
            }
        }

        #[test]
        fn s_alphas_are_antisymmetric(l1 in -6i64..=6, l2 in -6i64..=6) {
            let w = Weight::new(vec![rat(l1.max(l2)), rat(l1.min(l2))]);
            let a = casimir_alphas(&w, 4, 2, 1, 2).unwrap();
            prop_assert_eq!(&a.alpha_i_s + &a.alpha_j_s, BigRational::zero());
        }
    }
}
