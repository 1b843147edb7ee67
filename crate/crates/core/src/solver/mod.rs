//! Enclosures of λ_i: upper bounds from submultiplicativity of the degrees,
//! certified lower bounds from candidate tuples, and the surface shortcut.
//!
//! Candidates come from a fair enumeration of Ω, interleaved one-to-one with
//! tuples seeded from observed degree ratios. Candidates are evaluated in
//! fixed-size chunks, possibly in parallel; the successful candidate with the
//! smallest index wins, so the output does not depend on scheduling.

mod omega;
mod reference;
mod surface;
mod uniform;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use omega::{enumerate_omega, omega_index, Omega, OmegaIter};
pub use reference::{characteristic_polynomial, reference_perron_root};
pub use surface::{surface_lambda1, SurfaceStep};
pub use uniform::{uniform_growth_report, GrowthRow, UniformGrowthReport};

use crate::certificate::{certify_lower_bound, CandidateParams, Certificate, CertificateError};
use crate::exactnum::{binomial, lt_pow, nth_root_enclosure, serde_rational, Enclosure, Rational};
use crate::oracle::{Capability, MixedDegreeOracle, MixedDegreeQuery, OracleError};

const CHUNK: usize = 32;
const GAMMAS: [(u64, u64); 5] = [(1, 2), (1, 4), (1, 16), (1, 256), (1, 65536)];
/// Offsets `c` of the seeded targets `β̂ - c 2^{-l}`.
const OFFSETS: [(u64, u64); 5] = [(1, 2), (1, 4), (3, 4), (7, 8), (1, 8)];

const OPEN_LOWER_NOTE: &str = "lower endpoint reported open (lower, upper]; \
     the certificate itself proves the closed bound lambda_i >= lower";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<CertificateError> for SolverError {
    fn from(e: CertificateError) -> Self {
        match e {
            CertificateError::Oracle(o) => SolverError::Oracle(o),
            other => SolverError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// `l`: certified enclosures have width below `2^{-l}`.
    pub precision_bits: u32,
    /// Maximum number of candidate tuples evaluated.
    pub budget_candidates: u64,
    /// Largest iterate the oracle is asked about.
    pub budget_iterate: u64,
    pub heuristic_seeding: bool,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Iterate at which degree ratios are sampled for seeding.
    pub pilot: u64,
    /// Lower-bound mode: succeed on any certificate with bound above this
    /// value, without the width requirement.
    pub lower_bound_target: Option<Rational>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            precision_bits: 3,
            budget_candidates: 20_000,
            budget_iterate: 4096,
            heuristic_seeding: true,
            workers: 0,
            pilot: 6,
            lower_bound_target: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Trivial,
    Enumeration,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Fair,
    Seeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    /// position in the interleaved candidate stream
    pub index: u64,
    pub source: Source,
    /// position within its source
    pub source_index: u64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSample {
    pub i: usize,
    pub n: u64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaReport {
    pub map_fingerprint: String,
    pub i: usize,
    pub method: Method,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub precision_bits: u32,
    pub enclosure: Enclosure,
    #[serde(with = "serde_rational")]
    pub width: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<CandidateRecord>,
    pub candidates_evaluated: u64,
    pub degree_samples: Vec<DegreeSample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub surface_trace: Vec<SurfaceStep>,
    /// values rest on the mixed-volume formula without a cross-check
    pub formula_level: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl LambdaReport {
    fn new(oracle: &dyn MixedDegreeOracle, i: usize, method: Method, config: &SolverConfig, enclosure: Enclosure) -> Self {
        LambdaReport {
            map_fingerprint: oracle.fingerprint().to_string(),
            i,
            method,
            status: Status::Partial,
            reason: None,
            precision_bits: config.precision_bits,
            width: enclosure.width(),
            enclosure,
            certificate: None,
            candidate: None,
            candidates_evaluated: 0,
            degree_samples: Vec::new(),
            surface_trace: Vec::new(),
            formula_level: oracle.formula_level(),
            provenance: None,
        }
    }

    fn set_samples(&mut self, mut samples: Vec<(usize, u64, BigInt)>) {
        samples.sort();
        samples.dedup();
        self.degree_samples =
            samples.into_iter().map(|(i, n, v)| DegreeSample { i, n, value: v.to_string() }).collect();
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub(crate) fn two_pow_neg(l: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << l)
}

/// Upper endpoint of an enclosure of `(C(d,i) deg_i(f^n))^{1/n}`, which bounds
/// `λ_i` from above for every `n ≥ 1` by submultiplicativity.
pub fn upper_bound(oracle: &dyn MixedDegreeOracle, i: usize, n: u64, precision_bits: u32) -> Result<Rational, SolverError> {
    if i == 0 {
        return Ok(Rational::one());
    }
    if n == 0 {
        return Err(SolverError::Invalid("upper bounds need n >= 1".into()));
    }
    let x = fekete_term(oracle, i, n)?;
    let e = nth_root_enclosure(&x, n, &two_pow_neg(precision_bits + 2)).expect("positive");
    Ok(e.upper)
}

/// `C(d,i) deg_i(f^n)`
fn fekete_term(oracle: &dyn MixedDegreeOracle, i: usize, n: u64) -> Result<Rational, SolverError> {
    let c = binomial(oracle.dim() as u64, i as i64);
    Ok(Rational::from_integer(c * oracle.degree(i, n)?))
}

#[derive(Debug, Clone)]
struct Candidate {
    index: u64,
    source: Source,
    source_index: u64,
    params: CandidateParams,
    /// fixed for fair tuples, searched over powers of two for seeded ones
    n: Option<u64>,
}

#[derive(Debug, Default)]
struct Evaluation {
    certificate: Option<Certificate>,
    /// `(n, enclosure)` when check (2) also passed
    success: Option<(u64, Enclosure)>,
    uppers: Vec<(u64, Rational)>,
}

/// Queries whose support is needed for index `i` (the shapes do not depend on `m`).
fn required_queries(d: usize, i: usize) -> Vec<MixedDegreeQuery> {
    let mut qs = Vec::new();
    for j in 0..i {
        let e = d - i + j;
        for (p, q) in [(e + 1, i - j - 1), (e, i - j)] {
            for k in 0..=p {
                qs.push(MixedDegreeQuery::new(d, &[(2, k), (1, q), (0, d - k - q)]).expect("valid shape"));
            }
        }
    }
    for j in [i - 1, i] {
        qs.push(MixedDegreeQuery::first(d, 1, j).expect("valid shape"));
    }
    qs
}

fn first_unsupported(oracle: &dyn MixedDegreeOracle, i: usize) -> Option<String> {
    required_queries(oracle.dim(), i).iter().find_map(|q| match oracle.capability(q) {
        Capability::Supported => None,
        Capability::Unsupported(why) => Some(format!("query {} unsupported: {why}", q.key())),
    })
}

fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new((x * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

/// Tuples near the observed growth: `α̂_j` from ratios of consecutive degree
/// ratios at the pilot iterate, `ε` so that `ε^{2i} β̂_i` sits just below
/// `β̂_i`, and `m` running over powers of two.
fn seeded_candidates(oracle: &dyn MixedDegreeOracle, i: usize, config: &SolverConfig) -> Vec<CandidateParams> {
    let d = oracle.dim();
    let l = config.precision_bits;
    let n0 = config.pilot.max(1);
    let mut lambdas = vec![Rational::one()];
    for j in 1..=d {
        let est = match (oracle.degree(j, n0 + 1), oracle.degree(j, n0)) {
            (Ok(a), Ok(b)) => Rational::new(a, b),
            _ if j > i => lambdas[j - 1].clone(),
            _ => return Vec::new(),
        };
        lambdas.push(est);
    }
    let floor = Rational::new(BigInt::one(), BigInt::from(64));
    let mut alphas: Vec<Rational> = Vec::with_capacity(d);
    for j in 1..=d {
        let mut a = round_down(&(&lambdas[j] / &lambdas[j - 1]), l + 12);
        if a < floor {
            a = floor.clone();
        }
        if let Some(prev) = alphas.last() {
            if a > *prev {
                a = prev.clone();
            }
        }
        alphas.push(a);
    }
    let beta: Rational = alphas[..i].iter().fold(Rational::one(), |acc, a| acc * a);
    let step = two_pow_neg(l);
    let mut out = Vec::new();
    let mut m = 1u64;
    while 2 * m <= config.budget_iterate {
        for (cn, cd) in OFFSETS {
            let tau = &beta - &step * Rational::new(BigInt::from(cn), BigInt::from(cd));
            if tau <= Rational::zero() {
                continue;
            }
            let root = nth_root_enclosure(&(&tau / &beta), 2 * i as u64, &two_pow_neg(l + 12)).expect("positive");
            let eps = root.lower;
            if eps <= Rational::zero() || eps >= Rational::one() {
                continue;
            }
            for (gn, gd) in GAMMAS {
                out.push(CandidateParams {
                    i,
                    alphas: alphas.clone(),
                    gamma: Rational::new(BigInt::from(gn), BigInt::from(gd)),
                    epsilon: eps.clone(),
                    m,
                });
            }
        }
        m *= 2;
    }
    out
}

/// Interleaves fair and seeded candidates one-to-one, starting with the fair stream.
struct CandidateStream {
    i: usize,
    fair: OmegaIter,
    fair_taken: u64,
    seeded: Vec<CandidateParams>,
    seeded_taken: u64,
    next_index: u64,
}

impl CandidateStream {
    fn next(&mut self) -> Candidate {
        let index = self.next_index;
        self.next_index += 1;
        let want_seeded = index % 2 == 1 && (self.seeded_taken as usize) < self.seeded.len();
        if want_seeded {
            let params = self.seeded[self.seeded_taken as usize].clone();
            self.seeded_taken += 1;
            return Candidate { index, source: Source::Seeded, source_index: self.seeded_taken - 1, params, n: None };
        }
        let w = self.fair.next().expect("infinite enumeration");
        self.fair_taken += 1;
        Candidate {
            index,
            source: Source::Fair,
            source_index: self.fair_taken - 1,
            params: CandidateParams { i: self.i, alphas: w.alphas, gamma: w.gamma, epsilon: w.epsilon, m: w.m },
            n: Some(w.n),
        }
    }
}

fn evaluate(oracle: &dyn MixedDegreeOracle, c: &Candidate, config: &SolverConfig) -> Evaluation {
    let mut ev = Evaluation::default();
    let i = c.params.i;
    if 2 * c.params.m > config.budget_iterate {
        return ev;
    }
    let cert = match certify_lower_bound(oracle, &c.params) {
        Ok(Some(cert)) => cert,
        _ => return ev,
    };
    let bound = cert.bound.clone();
    ev.certificate = Some(cert);
    if let Some(target) = &config.lower_bound_target {
        if bound > *target {
            let upper = upper_bound(oracle, i, c.n.unwrap_or(1), config.precision_bits).ok();
            if let Some(u) = upper {
                ev.uppers.push((c.n.unwrap_or(1), u.clone()));
                ev.success = Some((c.n.unwrap_or(1), Enclosure { lower: bound, upper: u, lower_open: false, upper_open: false }));
            }
        }
        return ev;
    }
    let y = &bound + two_pow_neg(config.precision_bits);
    let ns: Vec<u64> = match c.n {
        Some(n) => vec![n],
        None => std::iter::successors(Some(1u64), |n| n.checked_mul(2)).take_while(|&n| n <= config.budget_iterate).collect(),
    };
    for n in ns {
        if n > config.budget_iterate {
            break;
        }
        let Ok(x) = fekete_term(oracle, i, n) else { break };
        let mut tol = two_pow_neg(config.precision_bits + 2);
        let passes = lt_pow(&x, &y, n);
        let mut enc = nth_root_enclosure(&x, n, &tol).expect("positive");
        if passes {
            while enc.upper >= y {
                tol /= Rational::from_integer(BigInt::from(4));
                enc = nth_root_enclosure(&x, n, &tol).expect("positive");
            }
        }
        ev.uppers.push((n, enc.upper.clone()));
        if passes {
            let enclosure = Enclosure { lower: bound, upper: enc.upper, lower_open: true, upper_open: false };
            ev.success = Some((n, enclosure));
            break;
        }
    }
    ev
}

/// Certified enclosure of `λ_i` by candidate enumeration, or a partial report
/// with the best bounds found within budget.
pub fn compute_lambda(oracle: &dyn MixedDegreeOracle, i: usize, config: &SolverConfig) -> Result<LambdaReport, SolverError> {
    let d = oracle.dim();
    if i > d {
        return Err(SolverError::Invalid(format!("index {i} exceeds dimension {d}")));
    }
    if config.budget_candidates == 0 || config.budget_iterate == 0 {
        return Err(SolverError::Invalid("budgets must be positive".into()));
    }
    if i == 0 {
        let mut r = LambdaReport::new(oracle, 0, Method::Trivial, config, Enclosure::point(Rational::one()));
        r.status = Status::Certified;
        return Ok(r);
    }
    if let Some(why) = first_unsupported(oracle, i) {
        if d == 2 && i == 1 {
            let mut r = surface_lambda1(oracle, config)?;
            r.provenance = Some(format!("enumeration unavailable ({why}); surface bound used"));
            return Ok(r);
        }
        return fallback_report(oracle, i, config, why);
    }

    let pool = (config.workers > 0)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(config.workers).build())
        .transpose()
        .map_err(|e| SolverError::Invalid(format!("thread pool: {e}")))?;

    let seeded = if config.heuristic_seeding { seeded_candidates(oracle, i, config) } else { Vec::new() };
    let mut stream = CandidateStream { i, fair: OmegaIter::new(d), fair_taken: 0, seeded, seeded_taken: 0, next_index: 0 };

    let pilot = config.pilot.clamp(1, config.budget_iterate);
    let mut best_upper = upper_bound(oracle, i, pilot, config.precision_bits)?;
    let mut best_lower = Rational::one();
    let mut best_cert: Option<Certificate> = None;
    let mut evaluated = 0u64;
    let mut samples: Vec<(usize, u64, BigInt)> = Vec::new();
    for n in [pilot, pilot + 1] {
        for j in 0..=i {
            if let Ok(v) = oracle.degree(j, n) {
                samples.push((j, n, v));
            }
        }
    }

    while evaluated < config.budget_candidates {
        let take = (config.budget_candidates - evaluated).min(CHUNK as u64) as usize;
        let chunk: Vec<Candidate> = (0..take).map(|_| stream.next()).collect();
        let run = || chunk.par_iter().map(|c| evaluate(oracle, c, config)).collect::<Vec<_>>();
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        evaluated += take as u64;
        for (c, ev) in chunk.iter().zip(&results) {
            for (_, u) in &ev.uppers {
                if *u < best_upper {
                    best_upper = u.clone();
                }
            }
            if let Some(cert) = &ev.certificate {
                if cert.bound > best_lower {
                    best_lower = cert.bound.clone();
                    best_cert = Some(cert.clone());
                }
            }
            if let Some((n, enclosure)) = &ev.success {
                let cert = ev.certificate.clone().expect("success carries a certificate");
                let mut r = LambdaReport::new(oracle, i, Method::Enumeration, config, enclosure.clone());
                r.status = Status::Certified;
                r.candidate = Some(CandidateRecord { index: c.index, source: c.source, source_index: c.source_index, n: *n });
                r.candidates_evaluated = evaluated;
                for j in 0..=i {
                    if let Ok(v) = oracle.degree(j, cert.m) {
                        samples.push((j, cert.m, v));
                    }
                }
                if let Ok(v) = oracle.degree(i, *n) {
                    samples.push((i, *n, v));
                }
                r.set_samples(samples);
                r.certificate = Some(cert);
                if config.lower_bound_target.is_none() {
                    r.provenance = Some(OPEN_LOWER_NOTE.into());
                }
                return Ok(r);
            }
        }
    }
    if best_upper < best_lower {
        best_upper = best_lower.clone();
    }
    let mut r = LambdaReport::new(oracle, i, Method::Enumeration, config, Enclosure::closed(best_lower, best_upper));
    r.reason = Some(format!("candidate budget {} exhausted", config.budget_candidates));
    r.candidates_evaluated = evaluated;
    r.certificate = best_cert;
    r.set_samples(samples);
    Ok(r)
}

/// Bounds available without the enumeration: `λ_i ≥ 1`, and either the
/// submultiplicative bound on `deg_i` or `λ_i ≤ λ_1^i` from first degrees.
fn fallback_report(oracle: &dyn MixedDegreeOracle, i: usize, config: &SolverConfig, why: String) -> Result<LambdaReport, SolverError> {
    let n = config.pilot.clamp(1, config.budget_iterate);
    let direct = upper_bound(oracle, i, n, config.precision_bits).ok();
    let upper = direct.or_else(|| {
        upper_bound(oracle, 1, n, config.precision_bits).ok().map(|u| crate::exactnum::pow_rational(&u, i as u64))
    });
    let Some(u) = upper else {
        return Err(SolverError::Unsupported(format!("{why}; no upper bound available")));
    };
    let mut r = LambdaReport::new(oracle, i, Method::Enumeration, config, Enclosure::closed(Rational::one(), u));
    r.reason = Some(why);
    Ok(r)
}
