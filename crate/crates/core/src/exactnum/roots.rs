use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{pow_rational, serde_rational};
use super::{ExactError, Rational};

/// A pair of exact rationals bracketing a real number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    pub lower_open: bool,
    pub upper_open: bool,
}

impl Enclosure {
    pub fn closed(lower: Rational, upper: Rational) -> Self {
        assert!(lower <= upper, "enclosure endpoints out of order");
        Enclosure { lower, upper, lower_open: false, upper_open: false }
    }

    pub fn point(value: Rational) -> Self {
        Enclosure::closed(value.clone(), value)
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lower_open { x > &self.lower } else { x >= &self.lower };
        let below = if self.upper_open { x < &self.upper } else { x <= &self.upper };
        above && below
    }

    /// Containment for a real number `r` with `r^n = q` (q > 0, r > 0), decided exactly.
    pub fn contains_root(&self, q: &Rational, n: u64) -> bool {
        let lo = pow_rational(&self.lower, n);
        let hi = pow_rational(&self.upper, n);
        let above = if self.lower <= Rational::zero() {
            true
        } else if self.lower_open {
            &lo < q
        } else {
            &lo <= q
        };
        let below = if self.upper_open { q < &hi } else { q <= &hi };
        above && below
    }
}

/// Encloses `q^(1/n)` between rationals `lower <= upper` with `upper - lower <= tol`.
///
/// Exact n-th powers come back as a degenerate enclosure. Otherwise the endpoints
/// are consecutive multiples of `2^-k` where `2^-k <= tol`.
pub fn nth_root_enclosure(q: &Rational, n: u64, tol: &Rational) -> Result<Enclosure, ExactError> {
    if !q.is_positive() {
        return Err(ExactError::Domain(format!("root of non-positive {q}")));
    }
    if !tol.is_positive() {
        return Err(ExactError::Domain(format!("non-positive tolerance {tol}")));
    }
    if n == 0 {
        return Err(ExactError::Domain("root index 0".into()));
    }
    if n == 1 {
        return Ok(Enclosure::point(q.clone()));
    }
    let index = u32::try_from(n).map_err(|_| ExactError::Domain(format!("root index {n} too large")))?;
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let (a, b) = (num.nth_root(index), den.nth_root(index));
    if a.pow(index) == num && b.pow(index) == den {
        return Ok(Enclosure::point(Rational::new(to_int(a), to_int(b))));
    }
    // smallest k with 2^k * tol >= 1
    let mut k: u64 = 0;
    let mut scaled = tol.clone();
    while scaled < Rational::one() {
        scaled *= Rational::from_integer(BigInt::from(2));
        k += 1;
    }
    let shift = k.checked_mul(n).ok_or_else(|| ExactError::Domain("precision overflow".into()))?;
    let scaled_num = num << shift;
    let floor = &scaled_num / &den;
    let root = floor.nth_root(index);
    let scale = BigInt::one() << k;
    let lower = Rational::new(to_int(root.clone()), scale.clone());
    if root.pow(index) * &den == scaled_num {
        return Ok(Enclosure::point(lower));
    }
    let upper = Rational::new(to_int(root + 1u32), scale);
    Ok(Enclosure::closed(lower, upper))
}

/// `x < y^n`, decided exactly.
pub fn lt_pow(x: &Rational, y: &Rational, n: u64) -> bool {
    // x/a < (p/r)^n  <=>  x_num * r^n < p^n * x_den  (denominators positive)
    let idx = u32::try_from(n).expect("exponent fits in u32");
    let lhs = x.numer() * y.denom().pow(idx);
    let rhs = y.numer().pow(idx) * x.denom();
    lhs < rhs
}

/// Binomial coefficient, zero outside `0..=d`.
pub fn binomial(d: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > d {
        return BigInt::zero();
    }
    let k = (k as u64).min(d - k as u64);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(d - j) / BigInt::from(j + 1);
    }
    acc
}

fn to_int(u: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exact_cube_and_identity() {
        assert_eq!(nth_root_enclosure(&q("8"), 3, &q("1/100")).unwrap(), Enclosure::point(q("2")));
        assert_eq!(nth_root_enclosure(&q("2"), 1, &q("1/100")).unwrap(), Enclosure::point(q("2")));
        assert_eq!(nth_root_enclosure(&q("27/64"), 3, &q("1/100")).unwrap(), Enclosure::point(q("3/4")));
    }

    #[test]
    fn sqrt_five_by_squaring_endpoints() {
        let e = nth_root_enclosure(&q("5"), 2, &q("1/100")).unwrap();
        assert!(&e.lower * &e.lower <= q("5"));
        assert!(&e.upper * &e.upper >= q("5"));
        assert!(e.width() <= q("1/100"));
        assert!(e.width() > Rational::zero());
    }

    #[test]
    fn domain_errors() {
        assert!(nth_root_enclosure(&q("0"), 2, &q("1/2")).is_err());
        assert!(nth_root_enclosure(&q("-3"), 3, &q("1/2")).is_err());
        assert!(nth_root_enclosure(&q("3"), 3, &q("0")).is_err());
    }

    #[test]
    fn lt_pow_examples() {
        assert!(lt_pow(&q("7"), &q("2"), 3));
        assert!(!lt_pow(&q("8"), &q("2"), 3));
        assert!(!lt_pow(&q("9"), &q("2"), 3));
        assert!(lt_pow(&q("-1"), &q("-1/2"), 2));
        assert!(!lt_pow(&q("0"), &q("-1"), 3));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn contains_root_respects_openness() {
        let mut e = Enclosure::closed(q("2"), q("3"));
        assert!(e.contains_root(&q("4"), 2));
        e.lower_open = true;
        assert!(!e.contains_root(&q("4"), 2));
        assert!(e.contains_root(&q("5"), 2));
        assert!(!e.contains_root(&q("10"), 2));
    }

    proptest! {
        #[test]
        fn root_enclosure_brackets(num in 1u64..1_000_000, den in 1u64..10_000, n in 1u64..9, tol_exp in 1u32..40) {
            let x = Rational::new(BigInt::from(num), BigInt::from(den));
            let tol = Rational::new(BigInt::one(), BigInt::one() << tol_exp);
            let e = nth_root_enclosure(&x, n, &tol).unwrap();
            prop_assert!(pow_rational(&e.lower, n) <= x);
            prop_assert!(pow_rational(&e.upper, n) >= x);
            prop_assert!(e.width() <= tol);
            prop_assert_eq!(e.clone(), nth_root_enclosure(&x, n, &tol).unwrap());
        }

        #[test]
        fn lt_pow_matches_cross_multiplication(xn in -50i64..50, xd in 1i64..20, yn in -6i64..6, yd in 1i64..6, n in 0u64..5) {
            let x = Rational::new(BigInt::from(xn), BigInt::from(xd));
            let y = Rational::new(BigInt::from(yn), BigInt::from(yd));
            // brute force on integers: x < y^n  <=>  xn * yd^n < yn^n * xd
            let lhs = BigInt::from(xn) * BigInt::from(yd).pow(n as u32);
            let rhs = BigInt::from(yn).pow(n as u32) * BigInt::from(xd);
            prop_assert_eq!(lt_pow(&x, &y, n), lhs < rhs);
        }
    }
}
