use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use dyndeg_core::certificate::{verify_certificate, Certificate};
use dyndeg_core::exactnum::{format_rational, parse_rational, Rational};
use dyndeg_core::oracle::{
    export_cache, oracle_for, preload_cache, validate_oracle, MapSpec, MixedDegreeOracle, OracleConfig, OracleError,
};
use dyndeg_core::polyring::Budget;
use dyndeg_core::seqlab::{
    check_averaging_bound, check_submultiplicative, counterexample_sequence, fekete_estimate, flat_window,
};
use dyndeg_core::solver::{
    compute_lambda, reference_perron_root, surface_lambda1, uniform_growth_report, LambdaReport, SolverConfig,
    SolverError,
};
use serde_json::{json, Value};

use crate::{MapArgs, SolveArgs};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNMET: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type CliResult = Result<ExitCode, CliError>;

pub fn invalid(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INVALID, message: message.into() }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget(_) | OracleError::Unsupported(_) => CliError { code: EXIT_UNMET, message: e.to_string() },
            _ => invalid(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Oracle(o) => o.into(),
            SolverError::Unsupported(_) => CliError { code: EXIT_UNMET, message: e.to_string() },
            SolverError::Invalid(_) => invalid(e.to_string()),
        }
    }
}

pub struct LoadedMap {
    pub json: Value,
    pub spec: MapSpec,
    pub oracle: Arc<dyn MixedDegreeOracle>,
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: malformed JSON: {e}", path.display())))
}

pub fn load_map(args: &MapArgs) -> Result<LoadedMap, CliError> {
    let json = read_json(&args.map)?;
    let spec = MapSpec::from_json(&json).map_err(|e| invalid(format!("{}: {e}", args.map.display())))?;
    let config = OracleConfig { budget: Budget { max_terms: args.max_terms, max_line_degree: args.max_line_degree, ..Budget::default() } };
    let oracle = oracle_for(&spec, &config).map_err(|e| invalid(e.to_string()))?;
    if let Some(path) = &args.cache {
        if path.exists() {
            let data = read_json(path)?;
            preload_cache(oracle.as_ref(), &data).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(LoadedMap { json, spec, oracle })
}

fn save_cache(args: &MapArgs, oracle: &dyn MixedDegreeOracle) -> Result<(), CliError> {
    match &args.cache {
        Some(path) => write_text(path, &pretty(&export_cache(oracle))),
        None => Ok(()),
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Prints the JSON document and writes it to `out` when given.
pub fn emit(v: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = pretty(v);
    print!("{text}");
    if let Some(path) = out {
        write_text(path, &text)?;
    }
    Ok(())
}

fn exit_for(met: bool) -> ExitCode {
    if met {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNMET)
    }
}

fn solver_config(solve: &SolveArgs) -> Result<SolverConfig, CliError> {
    if solve.precision_bits == 0 {
        return Err(invalid("--precision-bits must be positive"));
    }
    if solve.budget_candidates == 0 || solve.budget_iterate == 0 {
        return Err(invalid("budgets must be positive"));
    }
    Ok(SolverConfig {
        precision_bits: solve.precision_bits,
        budget_candidates: solve.budget_candidates,
        budget_iterate: solve.budget_iterate,
        heuristic_seeding: !solve.no_seeding,
        workers: solve.workers,
        ..SolverConfig::default()
    })
}

fn rational_arg(text: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| invalid(format!("{flag}: {e}")))
}

pub fn degrees(args: &MapArgs, i: usize, n_max: u64, out: Option<&Path>) -> CliResult {
    let map = load_map(args)?;
    let d = map.oracle.dim();
    if i > d {
        return Err(invalid(format!("--i {i} exceeds dimension {d}")));
    }
    let mut rows = Vec::new();
    println!("{:>4}  deg_{i}(f^n)", "n");
    for n in 0..=n_max {
        match map.oracle.degree(i, n) {
            Ok(v) => {
                println!("{n:>4}  {v}");
                rows.push(json!({ "n": n, "value": v.to_string() }));
            }
            Err(e) => {
                println!("{n:>4}  error: {e}");
                rows.push(json!({ "n": n, "error": e.to_string() }));
            }
        }
    }
    let doc = json!({
        "map_fingerprint": map.oracle.fingerprint(),
        "backend": map.oracle.backend(),
        "i": i,
        "rows": rows,
    });
    if let Some(path) = out {
        write_text(path, &pretty(&doc))?;
    }
    save_cache(args, map.oracle.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn finish_report(report: &LambdaReport, strict: bool, out: Option<&Path>) -> CliResult {
    emit(&report.to_json(), out)?;
    Ok(exit_for(!strict || report.is_certified()))
}

pub fn lambda(
    args: &MapArgs,
    i: usize,
    solve: &SolveArgs,
    target: Option<&str>,
    certificate_out: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let mut config = solver_config(solve)?;
    config.lower_bound_target = target.map(|t| rational_arg(t, "--lower-bound-target")).transpose()?;
    let map = load_map(args)?;
    let report = compute_lambda(map.oracle.as_ref(), i, &config)?;
    if let (Some(path), Some(cert)) = (certificate_out, &report.certificate) {
        write_text(path, &pretty(&cert.to_json()))?;
    }
    save_cache(args, map.oracle.as_ref())?;
    finish_report(&report, solve.strict, out)
}

pub fn surface(args: &MapArgs, solve: &SolveArgs, out: Option<&Path>) -> CliResult {
    let config = solver_config(solve)?;
    let map = load_map(args)?;
    let report = surface_lambda1(map.oracle.as_ref(), &config)?;
    save_cache(args, map.oracle.as_ref())?;
    finish_report(&report, solve.strict, out)
}

pub fn validate(args: &MapArgs, trials: u64, seed: u64, certificate: Option<&Path>, out: Option<&Path>) -> CliResult {
    let map = load_map(args)?;
    let oracle = map.oracle.as_ref();
    if let Some(path) = certificate {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| invalid(format!("{}: malformed JSON: {e}", path.display())))?;
        let cert = Certificate::from_json(&value).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let verdict = verify_certificate(oracle, &cert);
        let byte_identical = pretty(&cert.to_json()) == text;
        let doc = json!({
            "certificate": path.display().to_string(),
            "map_fingerprint": oracle.fingerprint(),
            "valid": verdict.is_ok(),
            "error": verdict.as_ref().err().map(|e| e.to_string()),
            "bound": format_rational(&cert.bound),
            "byte_identical": byte_identical,
        });
        emit(&doc, out)?;
        save_cache(args, oracle)?;
        return Ok(exit_for(verdict.is_ok() && byte_identical));
    }
    if trials == 0 {
        return Err(invalid("--trials must be positive"));
    }
    let report = validate_oracle(oracle, trials, seed);
    emit(&serde_json::to_value(&report).expect("serializable"), out)?;
    save_cache(args, oracle)?;
    Ok(exit_for(report.passed()))
}

pub fn seqlab(n_max: u64, m_max: u64, out: Option<&Path>) -> CliResult {
    if n_max < 2 {
        return Err(invalid("--n-max must be at least 2"));
    }
    let s = counterexample_sequence(n_max).map_err(|e| invalid(e.to_string()))?;
    let sub = check_submultiplicative(&s);
    let averaging = check_averaging_bound(&s);
    let tol = Rational::new(1.into(), (1u64 << 20).into());
    let fekete = fekete_estimate(&s, &tol).ok();
    let windows: Vec<Value> =
        (1..=m_max).map(|m| json!({ "m": m, "n": flat_window(&s, m) })).collect();

    println!("n_max                 {n_max}");
    println!("submultiplicative     {} ({} pairs)", sub.holds, sub.pairs_checked);
    if let Some((p, q)) = sub.witness {
        println!("  first violation     A_{{{p}+{q}}} > A_{p} A_{q}");
    }
    println!("averaging bound       {}", averaging.map_or("holds".to_string(), |n| format!("fails at n = {n}")));
    match &fekete {
        Some(f) => println!("fekete upper bound    {}", format_rational(f)),
        None => println!("fekete upper bound    unavailable"),
    }
    for w in &windows {
        let n = w["n"].as_u64().map_or("none".to_string(), |n| n.to_string());
        println!("flat window m = {:<4}  n = {n}", w["m"]);
    }

    if let Some(path) = out {
        let rows = s.rows();
        if path.extension().is_some_and(|e| e == "csv") {
            let mut w = csv::Writer::from_path(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            for row in &rows {
                w.serialize(row).map_err(|e| invalid(e.to_string()))?;
            }
            w.flush().map_err(|e| invalid(e.to_string()))?;
        } else {
            let doc = json!({
                "n_max": n_max,
                "submultiplicative": sub,
                "averaging_bound_failure": averaging,
                "fekete_upper": fekete.as_ref().map(format_rational),
                "flat_windows": windows,
                "rows": rows,
            });
            write_text(path, &pretty(&doc))?;
        }
    }
    Ok(exit_for(sub.holds && averaging.is_none()))
}

#[allow(clippy::too_many_arguments)]
pub fn uniform(
    args: &MapArgs,
    i: usize,
    m: u64,
    n_max: u64,
    delta: &str,
    solve: &SolveArgs,
    out: Option<&Path>,
) -> CliResult {
    let config = solver_config(solve)?;
    let delta = rational_arg(delta, "--delta")?;
    let map = load_map(args)?;
    let oracle = map.oracle.as_ref();
    let lambda = compute_lambda(oracle, i, &config)?;
    let report = uniform_growth_report(oracle, i, m, n_max, &delta, &lambda.enclosure)?;
    let doc = json!({
        "map_fingerprint": oracle.fingerprint(),
        "lambda": lambda.to_json(),
        "growth": report,
    });
    emit(&doc, out)?;
    save_cache(args, oracle)?;
    let met = lambda.is_certified() && report.violations == 0;
    Ok(exit_for(!solve.strict || met))
}

pub fn reference(args: &MapArgs, i: usize, precision_bits: u32, out: Option<&Path>) -> CliResult {
    let map = load_map(args)?;
    let MapSpec::Monomial { matrix } = &map.spec else {
        return Err(CliError {
            code: EXIT_UNMET,
            message: "reference values are available for monomial maps only".into(),
        });
    };
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(1) << precision_bits);
    let enclosure = reference_perron_root(matrix, i, &tol)?;
    let doc = json!({
        "map_fingerprint": map.oracle.fingerprint(),
        "i": i,
        "precision_bits": precision_bits,
        "enclosure": enclosure,
    });
    emit(&doc, out)?;
    Ok(ExitCode::SUCCESS)
}
