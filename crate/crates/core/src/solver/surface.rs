use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{two_pow_neg, LambdaReport, Method, SolverConfig, SolverError, Status};
use crate::exactnum::{nth_root_enclosure, serde_rational, Enclosure, Rational};
use crate::oracle::MixedDegreeOracle;

/// One rung of the surface bound: `λ_1 ∈ [(deg_1 f^{2k} / (4 deg_1 f^k))^{1/k}, (2 deg_1 f^k)^{1/k}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceStep {
    pub k: u64,
    pub deg_k: String,
    pub deg_2k: String,
    /// `deg_1(f^{2k}) / (4 deg_1(f^k))`
    #[serde(with = "serde_rational")]
    pub lower_radicand: Rational,
    /// `2 deg_1(f^k)`
    #[serde(with = "serde_rational")]
    pub upper_radicand: Rational,
    pub lower_root: Enclosure,
    pub upper_root: Enclosure,
}

/// Brackets `λ_1` of a surface map by doubling `k` while `2k` stays within the
/// iterate budget, until the best bounds are closer than `2^{-l}`.
pub fn surface_lambda1(oracle: &dyn MixedDegreeOracle, config: &SolverConfig) -> Result<LambdaReport, SolverError> {
    if oracle.dim() != 2 {
        return Err(SolverError::Invalid(format!("the surface bound needs dimension 2, got {}", oracle.dim())));
    }
    let target = two_pow_neg(config.precision_bits);
    let tol = two_pow_neg(config.precision_bits + 6);
    let one = Rational::one();
    let mut lower = one.clone();
    let mut upper: Option<Rational> = None;
    let mut steps: Vec<SurfaceStep> = Vec::new();
    let mut reason = None;
    let mut samples = Vec::new();
    let mut k: u64 = 1;
    loop {
        if 2 * k > config.budget_iterate {
            reason = Some(format!("iterate budget {} reached", config.budget_iterate));
            break;
        }
        let (dk, d2k) = match (oracle.degree(1, k), oracle.degree(1, 2 * k)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                reason = Some(e.to_string());
                break;
            }
        };
        samples.push((1, k, dk.clone()));
        samples.push((1, 2 * k, d2k.clone()));
        let lower_radicand = Rational::new(d2k.clone(), dk.clone() * BigInt::from(4));
        let upper_radicand = Rational::from_integer(dk.clone() * BigInt::from(2));
        let lower_root = nth_root_enclosure(&lower_radicand, k, &tol).expect("positive radicand");
        let upper_root = nth_root_enclosure(&upper_radicand, k, &tol).expect("positive radicand");
        if lower_root.lower > lower {
            lower = lower_root.lower.clone();
        }
        if upper.as_ref().is_none_or(|u| upper_root.upper < *u) {
            upper = Some(upper_root.upper.clone());
        }
        steps.push(SurfaceStep {
            k,
            deg_k: dk.to_string(),
            deg_2k: d2k.to_string(),
            lower_radicand,
            upper_radicand,
            lower_root,
            upper_root,
        });
        if upper.as_ref().is_some_and(|u| u - &lower < target) {
            break;
        }
        k *= 2;
    }
    let Some(upper) = upper else {
        return Err(SolverError::Unsupported(reason.unwrap_or_else(|| "no first degrees available".into())));
    };
    let upper = if upper < lower { lower.clone() } else { upper };
    let enclosure = Enclosure::closed(lower, upper);
    let certified = enclosure.width() < target;
    let mut report = LambdaReport::new(oracle, 1, Method::Surface, config, enclosure);
    report.status = if certified { Status::Certified } else { Status::Partial };
    report.reason = if certified { None } else { reason.or_else(|| Some("width not reached".into())) };
    report.surface_trace = steps;
    report.set_samples(samples);
    Ok(report)
}
