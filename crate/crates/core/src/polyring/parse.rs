use num_traits::{One, Zero};

use super::{Exponents, PolyError};
use crate::exactnum::{parse_rational, Rational};

/// Splits `c*x^a*y - 3/2*z^2 + ...` into exponent vectors and rational
/// coefficients. Parentheses are not supported; whitespace is ignored.
pub fn parse_terms(text: &str, vars: &[String]) -> Result<Vec<(Exponents, Rational)>, PolyError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (idx, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && !current.ends_with('^') {
            if idx > 0 {
                if current.is_empty() {
                    return Err(PolyError::Parse(format!("dangling sign in {text:?}")));
                }
                pieces.push((negative, std::mem::take(&mut current)));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(PolyError::Parse(format!("dangling sign in {text:?}")));
    }
    pieces.push((negative, current));

    let mut terms = Vec::with_capacity(pieces.len());
    for (neg, body) in pieces {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; vars.len()];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(PolyError::Parse(format!("empty factor in {text:?}")));
            }
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                coeff *= parse_rational(factor).map_err(|e| PolyError::Parse(e.to_string()))?;
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    let k: u32 = p
                        .parse()
                        .map_err(|_| PolyError::Parse(format!("bad exponent {p:?} in {text:?}")))?;
                    (n, k)
                }
                None => (factor, 1),
            };
            let slot = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| PolyError::Parse(format!("unknown variable {name:?}")))?;
            exps[slot] += power;
        }
        if neg {
            coeff = -coeff;
        }
        if !coeff.is_zero() {
            terms.push((exps, coeff));
        }
    }
    Ok(terms)
}
