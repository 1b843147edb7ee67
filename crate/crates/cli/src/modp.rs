use std::path::Path;
use std::process::ExitCode;

use dyndeg_core::oracle::MapSpec;
use dyndeg_core::polyring::{degree_sequence, Budget, DegreeSequence, Field, ProjComponents, SequenceStatus};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::commands::{invalid, load_map, pretty, write_text, CliResult};
use crate::MapArgs;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn strings(json: &Value, key: &str) -> Vec<String> {
    json[key].as_array().map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_string)).collect()).unwrap_or_default()
}

fn status_text(seq: &DegreeSequence) -> Option<String> {
    match &seq.status {
        SequenceStatus::Complete => None,
        SequenceStatus::Partial(why) => Some(why.clone()),
    }
}

/// Degree tables of `f` over Q and of its reductions `f_p`, flagging every
/// `n` with `deg_1(f_p^n) < deg_1(f^n)`.
pub fn run(args: &MapArgs, primes: &[u64], n_max: u64, out: Option<&Path>) -> CliResult {
    if let Some(p) = primes.iter().find(|p| !is_prime(**p) || **p >= 1 << 31) {
        return Err(invalid(format!("{p} is not a prime below 2^31")));
    }
    let map = load_map(args)?;
    let MapSpec::Projective { vars, components, .. } = &map.spec else {
        return Err(invalid("modp needs a projective map"));
    };
    if components.field() != Field::Q {
        return Err(invalid("modp needs a map over Q"));
    }
    let budget = Budget { max_terms: args.max_terms, max_line_degree: args.max_line_degree, ..Budget::default() };
    let n = n_max as usize;
    let over_q = degree_sequence(components, n, &budget);
    let texts = strings(&map.json, "components");

    println!("{:>8}  {}", "field", (0..=n).map(|k| format!("{k:>6}")).collect::<String>());
    let row = |label: &str, degs: &[BigInt]| {
        println!("{label:>8}  {}", degs.iter().map(|d| format!("{d:>6}")).collect::<String>());
    };
    row("Q", &over_q.degrees);

    let mut tables = Vec::new();
    for &p in primes {
        let reduced = match ProjComponents::parse(&texts, vars, Field::Fp(p)) {
            Ok(f) => f,
            Err(e) => {
                println!("{:>8}  skipped: {e}", format!("F_{p}"));
                tables.push(json!({ "p": p, "skipped": e.to_string() }));
                continue;
            }
        };
        let seq = degree_sequence(&reduced, n, &budget);
        row(&format!("F_{p}"), &seq.degrees);
        let drops: Vec<u64> = seq
            .degrees
            .iter()
            .zip(&over_q.degrees)
            .enumerate()
            .filter(|(_, (dp, dq))| dp < dq)
            .map(|(k, _)| k as u64)
            .collect();
        if !drops.is_empty() {
            println!("{:>8}  drops at n = {drops:?}", "");
        }
        tables.push(json!({
            "p": p,
            "degrees": seq.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "exact_through": seq.exact_through,
            "status": status_text(&seq),
            "drops": drops,
        }));
    }
    let doc = json!({
        "map_fingerprint": map.oracle.fingerprint(),
        "n_max": n_max,
        "rational": {
            "degrees": over_q.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "exact_through": over_q.exact_through,
            "status": status_text(&over_q),
        },
        "primes": tables,
    });
    if let Some(path) = out {
        write_text(path, &pretty(&doc))?;
    }
    Ok(ExitCode::SUCCESS)
}
