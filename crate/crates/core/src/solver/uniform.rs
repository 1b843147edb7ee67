use serde::Serialize;

use super::SolverError;
use crate::exactnum::{pow_rational, serde_rational, Enclosure, Rational};
use crate::oracle::MixedDegreeOracle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub n: u64,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformGrowthReport {
    pub i: usize,
    pub m: u64,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    /// `δ^m lo^m`
    #[serde(with = "serde_rational")]
    pub low: Rational,
    /// `δ^{-m} hi^m`
    #[serde(with = "serde_rational")]
    pub high: Rational,
    pub rows: Vec<GrowthRow>,
    /// rows outside `[low, high]`; for small `m` these are expected
    pub violations: usize,
}

/// Ratios `deg_i(f^{m(n+1)}) / deg_i(f^{mn})` for `n = 0..=n_max` against the
/// window `[δ^m lo^m, δ^{-m} hi^m]` built from an enclosure of `λ_i`.
pub fn uniform_growth_report(
    oracle: &dyn MixedDegreeOracle,
    i: usize,
    m: u64,
    n_max: u64,
    delta: &Rational,
    enclosure: &Enclosure,
) -> Result<UniformGrowthReport, SolverError> {
    let zero = Rational::from_integer(0.into());
    if *delta <= zero || *delta >= Rational::from_integer(1.into()) {
        return Err(SolverError::Invalid("delta must lie strictly between 0 and 1".into()));
    }
    if m == 0 {
        return Err(SolverError::Invalid("m must be positive".into()));
    }
    let dm = pow_rational(delta, m);
    let low = &dm * pow_rational(&enclosure.lower, m);
    let high = pow_rational(&enclosure.upper, m) / &dm;
    let mut rows = Vec::new();
    let mut prev = Rational::from_integer(oracle.degree(i, 0)?);
    for n in 0..=n_max {
        let next = Rational::from_integer(oracle.degree(i, m * (n + 1))?);
        let ratio = &next / &prev;
        let inside = low <= ratio && ratio <= high;
        rows.push(GrowthRow { n, ratio, inside });
        prev = next;
    }
    let violations = rows.iter().filter(|r| !r.inside).count();
    Ok(UniformGrowthReport { i, m, delta: delta.clone(), low, high, rows, violations })
}
