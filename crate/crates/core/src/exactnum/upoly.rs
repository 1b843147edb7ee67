//! Dense univariate polynomials over Q with Sturm-sequence root isolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Enclosure, Rational};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r.last().unwrap() / &lead;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                r[shift + k] -= &factor * c;
            }
            quot[shift] = factor;
            r.pop();
        }
        (UPoly::new(quot), UPoly::new(r))
    }

    pub fn rem(&self, divisor: &UPoly) -> UPoly {
        self.div_rem(divisor).1
    }

    fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Sturm chain of the square-free part: q, q', -rem(q, q'), ...
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let chain = self.raw_sturm_chain();
        let g = chain.last().unwrap();
        if g.degree().unwrap_or(0) == 0 {
            return chain;
        }
        let (sqfree, r) = self.div_rem(g);
        debug_assert!(r.is_zero());
        sqfree.raw_sturm_chain()
    }

    fn raw_sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone()];
        if self.degree().unwrap_or(0) == 0 {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("zero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// Largest real root bracketed to width `<= tol`, or `None` if there are no real roots.
    pub fn largest_real_root(&self, tol: &Rational) -> Option<Enclosure> {
        if self.degree().unwrap_or(0) == 0 {
            return None;
        }
        let chain = self.sturm_chain();
        let bound = self.root_bound();
        let mut lo = -bound.clone();
        let mut hi = bound;
        if count_roots(&chain, &lo, &hi) == 0 {
            return None;
        }
        let two = Rational::from_integer(BigInt::from(2));
        // invariant: the largest root lies in (lo, hi]
        while &hi - &lo > *tol {
            let mid = (&lo + &hi) / &two;
            if count_roots(&chain, &mid, &hi) > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if self.eval(&hi).is_zero() {
            return Some(Enclosure::point(hi));
        }
        Some(Enclosure { lower: lo, upper: hi, lower_open: true, upper_open: false })
    }
}

fn sign_changes(chain: &[UPoly], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(chain: &[UPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(chain, a).saturating_sub(sign_changes(chain, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn golden_square_root_bracket() {
        // x^2 - 3x + 1
        let p = UPoly::from_ints(&[1, -3, 1]);
        let e = p.largest_real_root(&q("1/1000")).unwrap();
        assert!(e.width() <= q("1/1000"));
        // sign change across the bracket isolates the root
        assert!(p.eval(&e.lower).is_negative());
        assert!(p.eval(&e.upper).is_positive());
        let chain = p.sturm_chain();
        assert_eq!(count_roots(&chain, &q("-10"), &q("10")), 2);
    }

    #[test]
    fn rational_root_is_exact() {
        // (x - 2)(x - 1)
        let p = UPoly::from_ints(&[2, -3, 1]);
        assert_eq!(p.largest_real_root(&q("1/64")).unwrap(), Enclosure::point(q("2")));
    }

    #[test]
    fn no_real_roots() {
        assert!(UPoly::from_ints(&[1, 0, 1]).largest_real_root(&q("1/8")).is_none());
    }

    #[test]
    fn multiple_roots_counted_once() {
        // (x - 1)^2 (x + 2)
        let p = UPoly::from_ints(&[2, -3, 0, 1]);
        assert_eq!(count_roots(&p.sturm_chain(), &q("-5"), &q("5")), 2);
        assert_eq!(p.largest_real_root(&q("1/32")).unwrap(), Enclosure::point(q("1")));
    }
}
