//! Lower-bound certificates for dynamical degrees.
//!
//! For a candidate tuple `(α_1..α_d; γ; ε; m)` and an index `i`, conditions
//! `I_i`, `J_i` and `K_i(0)` together imply `λ_i ≥ ε^{2i} β_i`, where
//! `β_j = α_1 ··· α_j`. All three compare exact rationals built from mixed
//! degrees of `L_{2m}`, `L_m` and `L`.
//!
//! `I_i` divides by `α_{j+1}^m` in the `j`-th inequality: it is the form used
//! when the condition is turned into a bigness statement, and it keeps the
//! condition a function of the candidate parameters alone.

mod growth;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use growth::{recursive_growth_bound, GrowthVerdict};

use crate::exactnum::{binomial, pow_rational, serde_rational, serde_rational_vec, Rational};
use crate::oracle::{MixedDegreeOracle, MixedDegreeQuery, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("certificate does not verify: {0}")]
    Mismatch(String),
}

/// A candidate tuple `ω` restricted to one index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateParams {
    pub i: usize,
    #[serde(with = "serde_rational_vec")]
    pub alphas: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub m: u64,
}

impl CandidateParams {
    pub fn validate(&self, dim: usize) -> Result<(), CertificateError> {
        let bad = |msg: String| Err(CertificateError::InvalidParams(msg));
        let zero = Rational::zero();
        let one = Rational::one();
        if self.alphas.len() != dim {
            return bad(format!("{} alphas for dimension {dim}", self.alphas.len()));
        }
        if self.i == 0 || self.i > dim {
            return bad(format!("index {} outside 1..={dim}", self.i));
        }
        if self.alphas.iter().any(|a| !a.is_positive()) {
            return bad("alphas must be positive".into());
        }
        if self.alphas.windows(2).any(|w| w[0] < w[1]) {
            return bad("alphas must be non-increasing".into());
        }
        for (name, v) in [("gamma", &self.gamma), ("epsilon", &self.epsilon)] {
            if *v <= zero || *v >= one {
                return bad(format!("{name} must lie strictly between 0 and 1"));
            }
        }
        if self.m == 0 {
            return bad("m must be positive".into());
        }
        Ok(())
    }

    /// `β_j = α_1 ··· α_j`, with `β_0 = 1`.
    pub fn beta(&self, j: usize) -> Rational {
        self.alphas[..j].iter().fold(Rational::one(), |acc, a| acc * a)
    }

    /// `ε^{2i} β_i`
    pub fn bound(&self) -> Rational {
        pow_rational(&self.epsilon, 2 * self.i as u64) * self.beta(self.i)
    }
}

/// One exact inequality `lhs > rhs` (conditions I, K) or `lhs < rhs` (J).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub holds: bool,
    pub transcript: Vec<TranscriptEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub i: usize,
    #[serde(with = "serde_rational_vec")]
    pub alphas: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub m: u64,
    /// `ε^{2i} β_i ≤ λ_i`
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    pub transcript: Vec<TranscriptEntry>,
    pub map_fingerprint: String,
}

impl Certificate {
    pub fn params(&self) -> CandidateParams {
        CandidateParams {
            i: self.i,
            alphas: self.alphas.clone(),
            gamma: self.gamma.clone(),
            epsilon: self.epsilon.clone(),
            m: self.m,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, CertificateError> {
        serde_json::from_value(v.clone()).map_err(|e| CertificateError::InvalidParams(e.to_string()))
    }
}

fn ratio(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

/// `((L_{2m} + tL)^p · L_m^q · L^{d-p-q})` expanded binomially.
fn shifted_mixed(
    oracle: &dyn MixedDegreeOracle,
    m: u64,
    t: &Rational,
    p: usize,
    q: usize,
) -> Result<Rational, CertificateError> {
    let d = oracle.dim();
    let mut total = Rational::zero();
    for k in 0..=p {
        let query = MixedDegreeQuery::new(d, &[(2 * m, k), (m, q), (0, d - k - q)])?;
        let value = oracle.mixed_degree(&query)?;
        total += ratio(binomial(p as u64, k as i64) * value) * pow_rational(t, (p - k) as u64);
    }
    Ok(total)
}

fn condition_i(
    oracle: &dyn MixedDegreeOracle,
    p: &CandidateParams,
    stop_early: bool,
) -> Result<ConditionOutcome, CertificateError> {
    p.validate(oracle.dim())?;
    let d = oracle.dim();
    let (i, m) = (p.i, p.m);
    let eps_m = pow_rational(&p.epsilon, m);
    let base = pow_rational(&p.alphas[i - 1], m) * pow_rational(&p.gamma, m);
    let mut transcript = Vec::with_capacity(i);
    let mut holds = true;
    for j in 0..i {
        let alpha_m = pow_rational(&p.alphas[j], m);
        let t = &alpha_m * &base;
        let e = d - i + j;
        let num = shifted_mixed(oracle, m, &t, e + 1, i - j - 1)?;
        let den = shifted_mixed(oracle, m, &t, e, i - j)?;
        let lhs = num / (alpha_m * den);
        let rhs = Rational::from_integer(BigInt::from(e + 1)) * &eps_m;
        let ok = lhs > rhs;
        holds &= ok;
        transcript.push(TranscriptEntry { condition: "I".into(), j: Some(j), lhs, rhs, holds: ok });
        if !ok && stop_early {
            break;
        }
    }
    Ok(ConditionOutcome { holds, transcript })
}

/// Condition `I_i`: for `j = 0..i-1`, with `t = α_{j+1}^m α_i^m γ^m`,
/// `((L_{2m}+tL)^{d-i+j+1} · L_m^{i-j-1}) / (α_{j+1}^m ((L_{2m}+tL)^{d-i+j} · L_m^{i-j})) > (d-i+j+1) ε^m`.
pub fn eval_condition_i(oracle: &dyn MixedDegreeOracle, p: &CandidateParams) -> Result<ConditionOutcome, CertificateError> {
    condition_i(oracle, p, false)
}

/// `B = Σ_{j<i} C(d,j) C(d,i-1) α_i^m γ^m / (ε^{m(j+1)} β_j^m) · deg_j(f^m) deg_{i-1}(f^m)`.
pub fn eval_b(oracle: &dyn MixedDegreeOracle, p: &CandidateParams) -> Result<Rational, CertificateError> {
    p.validate(oracle.dim())?;
    let d = oracle.dim() as u64;
    let (i, m) = (p.i, p.m);
    let head = pow_rational(&p.alphas[i - 1], m) * pow_rational(&p.gamma, m);
    let deg_prev = ratio(oracle.degree(i - 1, m)?);
    let mut total = Rational::zero();
    for j in 0..i {
        let coeff = ratio(binomial(d, j as i64) * binomial(d, i as i64 - 1));
        let scale = pow_rational(&p.epsilon, m * (j as u64 + 1)) * pow_rational(&p.beta(j), m);
        total += coeff * &head / scale * ratio(oracle.degree(j, m)?) * &deg_prev;
    }
    Ok(total)
}

fn condition_j_with(p: &CandidateParams, b: &Rational) -> ConditionOutcome {
    let mi = p.m * p.i as u64;
    let eps_mi = pow_rational(&p.epsilon, mi);
    let rhs = &eps_mi * &eps_mi * pow_rational(&p.beta(p.i), p.m) * (Rational::one() - &eps_mi);
    let holds = *b < rhs;
    ConditionOutcome {
        holds,
        transcript: vec![TranscriptEntry { condition: "J".into(), j: None, lhs: b.clone(), rhs, holds }],
    }
}

fn condition_k_with(
    oracle: &dyn MixedDegreeOracle,
    p: &CandidateParams,
    b: &Rational,
    n: u64,
) -> Result<ConditionOutcome, CertificateError> {
    let lhs = ratio(oracle.degree(p.i, p.m * (n + 1))?);
    let rhs = b / pow_rational(&p.epsilon, p.m * p.i as u64) * ratio(oracle.degree(p.i, p.m * n)?);
    let holds = lhs > rhs;
    Ok(ConditionOutcome {
        holds,
        transcript: vec![TranscriptEntry { condition: "K".into(), j: None, lhs, rhs, holds }],
    })
}

/// Condition `J_i`: `B < ε^{2mi} β_i^m (1 - ε^{mi})`.
pub fn eval_condition_j(oracle: &dyn MixedDegreeOracle, p: &CandidateParams) -> Result<ConditionOutcome, CertificateError> {
    let b = eval_b(oracle, p)?;
    Ok(condition_j_with(p, &b))
}

/// Condition `K_i(N)`: `deg_i(f^{m(N+1)}) > B ε^{-mi} deg_i(f^{mN})`.
pub fn eval_condition_k(
    oracle: &dyn MixedDegreeOracle,
    p: &CandidateParams,
    n: u64,
) -> Result<ConditionOutcome, CertificateError> {
    let b = eval_b(oracle, p)?;
    condition_k_with(oracle, p, &b, n)
}

/// Returns a certificate for `λ_i ≥ ε^{2i} β_i` when `I_i`, `J_i` and `K_i(0)`
/// all hold. The cheap conditions `J` and `K` are tried first.
pub fn certify_lower_bound(
    oracle: &dyn MixedDegreeOracle,
    p: &CandidateParams,
) -> Result<Option<Certificate>, CertificateError> {
    let b = eval_b(oracle, p)?;
    let j = condition_j_with(p, &b);
    if !j.holds {
        return Ok(None);
    }
    let k = condition_k_with(oracle, p, &b, 0)?;
    if !k.holds {
        return Ok(None);
    }
    let cond_i = condition_i(oracle, p, true)?;
    if !cond_i.holds {
        return Ok(None);
    }
    let mut transcript = cond_i.transcript;
    transcript.extend(j.transcript);
    transcript.extend(k.transcript);
    Ok(Some(Certificate {
        i: p.i,
        alphas: p.alphas.clone(),
        gamma: p.gamma.clone(),
        epsilon: p.epsilon.clone(),
        m: p.m,
        bound: p.bound(),
        transcript,
        map_fingerprint: oracle.fingerprint().to_string(),
    }))
}

/// Re-evaluates a certificate against an oracle; succeeds only if every
/// transcript value is reproduced exactly.
pub fn verify_certificate(oracle: &dyn MixedDegreeOracle, cert: &Certificate) -> Result<(), CertificateError> {
    if cert.map_fingerprint != oracle.fingerprint() {
        return Err(CertificateError::Mismatch("certificate belongs to a different map".into()));
    }
    let p = cert.params();
    if cert.bound != p.bound() {
        return Err(CertificateError::Mismatch("bound is not ε^{2i}β_i".into()));
    }
    match certify_lower_bound(oracle, &p)? {
        Some(fresh) if fresh.transcript == cert.transcript => Ok(()),
        Some(_) => Err(CertificateError::Mismatch("transcript values differ".into())),
        None => Err(CertificateError::Mismatch("conditions fail on re-evaluation".into())),
    }
}
