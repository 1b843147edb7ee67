use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::SolverError;
use crate::exactnum::{Enclosure, Rational, UPoly};
use crate::polytope::det;

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, coefficients
/// in increasing degree.
pub fn characteristic_polynomial(a: &[Vec<BigInt>]) -> UPoly {
    let n = a.len();
    let ar: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::from_integer(BigInt::from(1));
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    s += &ar[i][l] * &mk[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &ar[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    UPoly::new(coeffs)
}

/// Ground truth for monomial maps: `λ_1` is the Perron root of an entrywise
/// nonnegative `A`, and `λ_d = |det A|`.
pub fn reference_perron_root(a: &[Vec<BigInt>], i: usize, tol: &Rational) -> Result<Enclosure, SolverError> {
    let d = a.len();
    if d == 0 || a.iter().any(|r| r.len() != d) {
        return Err(SolverError::Invalid("matrix must be square and nonempty".into()));
    }
    if i == d {
        return Ok(Enclosure::point(Rational::from_integer(det(a.to_vec()).abs())));
    }
    if i != 1 {
        return Err(SolverError::Unsupported(format!("no reference value for i = {i} in dimension {d}")));
    }
    if a.iter().flatten().any(|x| x.is_negative()) {
        return Err(SolverError::Unsupported("the Perron reference needs a nonnegative matrix".into()));
    }
    characteristic_polynomial(a)
        .largest_real_root(tol)
        .ok_or_else(|| SolverError::Invalid("characteristic polynomial without real roots".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn char_poly() {
        assert_eq!(characteristic_polynomial(&m(&[&[2, 1], &[1, 1]])), UPoly::from_ints(&[1, -3, 1]));
        // companion-like 3x3: x^3 - 2x^2 - x + 2 = (x-1)(x+1)(x-2)
        let p = characteristic_polynomial(&m(&[&[0, 0, -2], &[1, 0, 1], &[0, 1, 2]]));
        assert_eq!(p, UPoly::from_ints(&[2, -1, -2, 1]));
    }

    #[test]
    fn perron_examples() {
        let tol = parse_rational("1/1000000").unwrap();
        let e = reference_perron_root(&m(&[&[2, 1], &[1, 1]]), 1, &tol).unwrap();
        let p = UPoly::from_ints(&[1, -3, 1]);
        assert!(p.eval(&e.lower).is_negative() && p.eval(&e.upper).is_positive());
        assert!(e.width() <= tol);
        assert_eq!(reference_perron_root(&m(&[&[2, 0], &[0, 1]]), 1, &tol).unwrap(), Enclosure::point(parse_rational("2").unwrap()));
        assert_eq!(reference_perron_root(&m(&[&[1, 1], &[1, -1]]), 2, &tol).unwrap(), Enclosure::point(parse_rational("2").unwrap()));
        assert!(reference_perron_root(&m(&[&[1, 1], &[1, -1]]), 1, &tol).is_err());
        assert!(reference_perron_root(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 2, &tol).is_err());
    }
}
