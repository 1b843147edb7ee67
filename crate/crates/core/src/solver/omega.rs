use num_bigint::BigInt;
use num_integer::Integer;

use crate::exactnum::Rational;

/// A tuple `ω = (α_1..α_d; γ; ε; m; n)` of the search space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Omega {
    pub alphas: Vec<Rational>,
    pub gamma: Rational,
    pub epsilon: Rational,
    pub m: u64,
    pub n: u64,
}

/// Walks Ω in order of height (the largest numerator, denominator, `m` or
/// `n`), lexicographically within a height on the integer vector
/// `(num α_1, den α_1, ..., num γ, den γ, num ε, den ε, m, n)`. Only tuples
/// in lowest terms with `α` non-increasing and `γ, ε ∈ (0, 1)` are yielded,
/// so every tuple appears exactly once.
#[derive(Debug, Clone)]
pub struct OmegaIter {
    dim: usize,
    height: u64,
    digits: Vec<u64>,
    started: bool,
}

impl OmegaIter {
    pub fn new(dim: usize) -> Self {
        OmegaIter { dim, height: 1, digits: vec![1; 2 * dim + 6], started: false }
    }

    fn advance(&mut self) {
        // odometer over [1, height]^K; on wrap move to the next height
        for pos in (0..self.digits.len()).rev() {
            if self.digits[pos] < self.height {
                self.digits[pos] += 1;
                return;
            }
            self.digits[pos] = 1;
        }
        self.height += 1;
    }

    fn current(&self) -> Option<Omega> {
        let v = &self.digits;
        if !v.contains(&self.height) {
            return None;
        }
        let frac = |k: usize| -> Option<Rational> {
            let (a, b) = (v[k], v[k + 1]);
            (a.gcd(&b) == 1).then(|| Rational::new(BigInt::from(a), BigInt::from(b)))
        };
        let d = self.dim;
        let mut alphas = Vec::with_capacity(d);
        for j in 0..d {
            let a = frac(2 * j)?;
            if alphas.last().is_some_and(|prev: &Rational| *prev < a) {
                return None;
            }
            alphas.push(a);
        }
        let (g, e) = (2 * d, 2 * d + 2);
        if v[g] >= v[g + 1] || v[e] >= v[e + 1] {
            return None;
        }
        Some(Omega { alphas, gamma: frac(g)?, epsilon: frac(e)?, m: v[2 * d + 4], n: v[2 * d + 5] })
    }
}

impl Iterator for OmegaIter {
    type Item = Omega;

    fn next(&mut self) -> Option<Omega> {
        loop {
            if self.started {
                self.advance();
            }
            self.started = true;
            if let Some(w) = self.current() {
                return Some(w);
            }
        }
    }
}

/// The tuple at `index` of the fair enumeration.
pub fn enumerate_omega(dim: usize, index: u64) -> Omega {
    OmegaIter::new(dim).nth(index as usize).expect("the enumeration is infinite")
}

/// Position of a tuple in the fair enumeration.
pub fn omega_index(dim: usize, target: &Omega) -> u64 {
    OmegaIter::new(dim).position(|w| w == *target).expect("every tuple is enumerated") as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;
    use std::collections::HashSet;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn first_tuple() {
        let w = enumerate_omega(2, 0);
        assert_eq!(w, Omega { alphas: vec![r("1"), r("1")], gamma: r("1/2"), epsilon: r("1/2"), m: 1, n: 1 });
        assert_eq!(enumerate_omega(3, 0).alphas, vec![r("1"); 3]);
    }

    #[test]
    fn injective_and_valid() {
        let seen: Vec<Omega> = OmegaIter::new(2).take(20000).collect();
        let set: HashSet<&Omega> = seen.iter().collect();
        assert_eq!(set.len(), seen.len());
        for w in &seen {
            assert!(w.alphas.windows(2).all(|p| p[0] >= p[1]));
            assert!(w.gamma < r("1") && w.epsilon < r("1"));
        }
    }

    #[test]
    fn fair() {
        let target = Omega { alphas: vec![r("2"), r("1")], gamma: r("1/2"), epsilon: r("3/4"), m: 3, n: 4 };
        let idx = omega_index(2, &target);
        assert_eq!(enumerate_omega(2, idx), target);
    }
}
