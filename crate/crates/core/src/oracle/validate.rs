use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MixedDegreeOracle, MixedDegreeQuery, OracleError};
use crate::exactnum::{binomial, format_rational, Rational};

/// A failed inequality `lhs ≤ rhs` with its exact witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub map_fingerprint: String,
    pub backend: String,
    pub trials: u64,
    pub seed: u64,
    /// inequalities evaluated
    pub checks: u64,
    /// samples abandoned because the oracle ran out of budget
    pub skipped: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker<'a> {
    oracle: &'a dyn MixedDegreeOracle,
    report: ValidationReport,
}

impl Checker<'_> {
    fn deg(&self, i: usize, n: u64) -> Result<Rational, OracleError> {
        self.oracle.degree(i, n).map(Rational::from_integer)
    }

    fn mixed(&self, parts: &[(u64, usize)]) -> Result<Rational, OracleError> {
        let q = MixedDegreeQuery::new(self.oracle.dim(), parts)?;
        self.oracle.mixed_degree(&q).map(Rational::from_integer)
    }

    fn expect_le(&mut self, rule: &str, witness: String, lhs: Rational, rhs: Rational) {
        self.report.checks += 1;
        if lhs > rhs {
            self.report.violations.push(Violation {
                rule: rule.into(),
                witness,
                lhs: format_rational(&lhs),
                rhs: format_rational(&rhs),
            });
        }
    }

    fn record(&mut self, outcome: Result<(), OracleError>) {
        if outcome.is_err() {
            self.report.skipped += 1;
        }
    }

    /// Two-sided bound of a mixed degree by first-type degrees of differences
    /// of iterates, with `l_i = r_1 + ... + r_i` and `m_{s+1} = 0`.
    fn sandwich(&mut self, rng: &mut ChaCha8Rng, max_iter: u64) -> Result<(), OracleError> {
        let d = self.oracle.dim();
        let s = rng.gen_range(1..=d.min(max_iter as usize + 1));
        let mut ms: Vec<u64> = Vec::new();
        while ms.len() < s {
            let m = rng.gen_range(0..=max_iter);
            if !ms.contains(&m) {
                ms.push(m);
            }
        }
        ms.sort_unstable_by(|a, b| b.cmp(a));
        // random composition of d into s positive parts
        let mut cuts: Vec<usize> = Vec::new();
        while cuts.len() < s - 1 {
            let c = rng.gen_range(1..d);
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_unstable();
        cuts.push(d);
        let rs: Vec<usize> = cuts.iter().scan(0, |prev, &c| Some(c - std::mem::replace(prev, c))).collect();
        let ls: Vec<usize> = cuts;
        let parts: Vec<(u64, usize)> = ms.iter().copied().zip(rs.iter().copied()).collect();
        let mixed = self.mixed(&parts)?;
        let next_m = |k: usize| if k + 1 < s { ms[k + 1] } else { 0 };

        let mut upper = Rational::one();
        for k in 0..s {
            upper *= Rational::from_integer(binomial(d as u64, ls[k] as i64)) * self.deg(ls[k], ms[k] - next_m(k))?;
        }
        let mut lower = self.deg(d, ms[0])?;
        for k in 0..s - 1 {
            let gap = ms[0] - ms[k + 1];
            lower *= self.deg(ls[k], gap)?;
            lower /= Rational::from_integer(binomial((d - ls[k]) as u64, rs[k + 1] as i64)) * self.deg(ls[k + 1], gap)?;
        }
        let key = MixedDegreeQuery::new(d, &parts)?.key();
        self.expect_le("sandwich-upper", key.clone(), mixed.clone(), upper);
        self.expect_le("sandwich-lower", key, lower, mixed);
        Ok(())
    }

    /// Moving `s` factors from `L_{n1}` to `L_{n2}` against `A = L_{n3}^{d-r1-r2}`.
    fn exchange(&mut self, rng: &mut ChaCha8Rng, max_iter: u64) -> Result<(), OracleError> {
        let d = self.oracle.dim();
        let (n1, n2, n3) = (rng.gen_range(0..=max_iter), rng.gen_range(0..=max_iter), rng.gen_range(0..=max_iter));
        let r1 = rng.gen_range(0..=d);
        let r2 = rng.gen_range(0..=d - r1);
        let s = rng.gen_range(0..=r1);
        let rest = d - r1 - r2;
        let lhs = self.mixed(&[(n1, r1), (n2, r2), (n3, rest)])?;
        let moved = self.mixed(&[(n1, r1 - s), (n2, r2 + s), (n3, rest)])?;
        let ratio = if n1 >= n2 {
            self.deg(r1, n1 - n2)? / self.deg(r1 - s, n1 - n2)?
        } else {
            self.deg(d - r1, n2 - n1)? / self.deg(d - r1 + s, n2 - n1)?
        };
        let rhs = Rational::from_integer(binomial((rest + s) as u64, s as i64)) * ratio * moved;
        let witness = format!("n=({n1},{n2},{n3}) r=({r1},{r2}) s={s}");
        self.expect_le("exchange", witness, lhs, rhs);
        Ok(())
    }

    fn submultiplicative(&mut self, rng: &mut ChaCha8Rng, degrees: &[usize], max_iter: u64) -> Result<(), OracleError> {
        let d = self.oracle.dim();
        let i = degrees[rng.gen_range(0..degrees.len())];
        let (m, n) = (rng.gen_range(1..=max_iter), rng.gen_range(1..=max_iter));
        let lhs = self.deg(i, m + n)?;
        let rhs = Rational::from_integer(binomial(d as u64, i as i64)) * self.deg(i, m)? * self.deg(i, n)?;
        self.expect_le("submultiplicative", format!("i={i} m={m} n={n}"), lhs, rhs);
        Ok(())
    }
}

/// Samples `trials` instances of each inequality the oracle's capabilities
/// allow and reports every violation. Oracles limited to first and top degrees
/// are checked for submultiplicativity only.
pub fn validate_oracle(oracle: &dyn MixedDegreeOracle, trials: u64, seed: u64) -> ValidationReport {
    let d = oracle.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checker = Checker {
        oracle,
        report: ValidationReport {
            map_fingerprint: oracle.fingerprint().to_string(),
            backend: oracle.backend().to_string(),
            trials,
            seed,
            checks: 0,
            skipped: 0,
            violations: Vec::new(),
        },
    };
    let general = oracle.general_queries();
    let max_iter: u64 = match d {
        0..=2 => 6,
        3 => 4,
        _ => 2,
    };
    let degrees: Vec<usize> = (1..=d).filter(|&i| oracle.degree_capability(i, 1).is_supported()).collect();
    for _ in 0..trials {
        if general {
            let r = checker.sandwich(&mut rng, max_iter);
            checker.record(r);
            let r = checker.exchange(&mut rng, max_iter);
            checker.record(r);
        }
        if !degrees.is_empty() {
            let sub_max = if general { max_iter } else { 5 };
            let r = checker.submultiplicative(&mut rng, &degrees, sub_max);
            checker.record(r);
        }
    }
    checker.report
}
