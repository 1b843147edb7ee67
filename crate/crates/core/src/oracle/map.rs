use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::OracleError;
use crate::polyring::{is_dominant, Field, HomPoly, ProjComponents};
use crate::polytope::det;

const DOMINANCE_TRIALS: usize = 8;
const DOMINANCE_SEED: u64 = 0xd0_1ace;

/// A dominant rational self-map of `P^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSpec {
    /// `x ↦ x^A` on the torus, `A` a `d × d` integer matrix with `det A ≠ 0`.
    Monomial { matrix: Vec<Vec<BigInt>> },
    /// Homogeneous components in `d + 1` variables, content-free.
    Projective {
        vars: Vec<String>,
        components: ProjComponents,
        /// User-supplied topological degree `deg_d f`; not verified beyond
        /// `1 ≤ top_degree ≤ (deg f)^d`.
        top_degree: Option<BigInt>,
    },
}

fn bad(msg: impl Into<String>) -> OracleError {
    OracleError::InvalidMap(msg.into())
}

fn integer(v: &Value, what: &str) -> Result<BigInt, OracleError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("{what}: {s:?} is not an integer"))),
        other => Err(bad(format!("{what}: expected an integer, found {other}"))),
    }
}

fn small(v: &Value, what: &str) -> Result<u64, OracleError> {
    integer(v, what)?.to_u64().ok_or_else(|| bad(format!("{what} out of range")))
}

impl MapSpec {
    pub fn monomial(matrix: Vec<Vec<BigInt>>) -> Result<Self, OracleError> {
        let d = matrix.len();
        if d == 0 {
            return Err(bad("empty matrix"));
        }
        if matrix.iter().any(|row| row.len() != d) {
            return Err(bad("matrix is not square"));
        }
        if det(matrix.clone()).is_zero() {
            return Err(bad("monomial map with singular matrix is not dominant"));
        }
        Ok(MapSpec::Monomial { matrix })
    }

    pub fn projective(
        vars: Vec<String>,
        components: ProjComponents,
        top_degree: Option<BigInt>,
    ) -> Result<Self, OracleError> {
        let n = components.nvars();
        if vars.len() != n || components.components().len() != n {
            return Err(bad(format!("{} variables for {} components", vars.len(), components.components().len())));
        }
        if n < 2 {
            return Err(bad("projective maps need at least two variables"));
        }
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(bad("duplicate variable names"));
        }
        let deg = components.degree();
        if deg == 0 {
            return Err(bad("components must have degree at least 1"));
        }
        if let Some(t) = &top_degree {
            let max = BigInt::from(deg).pow((n - 1) as u32);
            if !t.is_positive() || t > &max {
                return Err(bad(format!("top_degree {t} outside [1, {max}]")));
            }
        }
        if !is_dominant(&components, DOMINANCE_TRIALS, DOMINANCE_SEED)? {
            return Err(bad("map is not dominant: its Jacobian determinant vanishes identically"));
        }
        Ok(MapSpec::Projective { vars, components, top_degree })
    }

    pub fn from_json_str(text: &str) -> Result<Self, OracleError> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self, OracleError> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing \"kind\""))?;
        let dim = v.get("dim").map(|d| small(d, "dim")).transpose()?;
        let spec = match kind {
            "monomial" => {
                let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| bad("missing \"matrix\""))?;
                let matrix = rows
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| bad("matrix rows must be arrays"))?
                            .iter()
                            .map(|e| integer(e, "matrix entry"))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::monomial(matrix)?
            }
            "projective" => {
                let field = match v.get("field") {
                    None => Field::Q,
                    Some(f) => match f.get("kind").and_then(Value::as_str) {
                        Some("Q") => Field::Q,
                        Some("Fp") => {
                            let p = small(f.get("p").ok_or_else(|| bad("Fp field without \"p\""))?, "p")?;
                            if !is_prime(p) || p >= 1 << 31 {
                                return Err(bad(format!("p = {p} must be a prime below 2^31")));
                            }
                            Field::Fp(p)
                        }
                        _ => return Err(bad("field kind must be \"Q\" or \"Fp\"")),
                    },
                };
                let strings = |key: &str| -> Result<Vec<String>, OracleError> {
                    v.get(key)
                        .and_then(Value::as_array)
                        .ok_or_else(|| bad(format!("missing \"{key}\"")))?
                        .iter()
                        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(format!("\"{key}\" must hold strings"))))
                        .collect()
                };
                let vars = strings("vars")?;
                let texts = strings("components")?;
                if texts.len() != vars.len() {
                    return Err(bad(format!("{} variables for {} components", vars.len(), texts.len())));
                }
                let components = ProjComponents::parse(&texts, &vars, field)?;
                let top_degree = match v.get("top_degree") {
                    None | Some(Value::Null) => None,
                    Some(t) => Some(integer(t, "top_degree")?),
                };
                Self::projective(vars, components, top_degree)?
            }
            other => return Err(bad(format!("unknown map kind {other:?}"))),
        };
        if let Some(d) = dim {
            if d as usize != spec.dim() {
                return Err(bad(format!("dim {d} does not match the map's dimension {}", spec.dim())));
            }
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        match self {
            MapSpec::Monomial { matrix } => matrix.len(),
            MapSpec::Projective { components, .. } => components.nvars() - 1,
        }
    }

    /// Normalized JSON with every integer as a string; keys sort
    /// alphabetically when serialized.
    pub fn canonical_json(&self) -> Value {
        match self {
            MapSpec::Monomial { matrix } => json!({
                "kind": "monomial",
                "dim": self.dim().to_string(),
                "matrix": matrix.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            MapSpec::Projective { vars, components, top_degree } => {
                let field = match components.field() {
                    Field::Q => json!({"kind": "Q"}),
                    Field::Fp(p) => json!({"kind": "Fp", "p": p.to_string()}),
                };
                let mut v = json!({
                    "kind": "projective",
                    "dim": self.dim().to_string(),
                    "field": field,
                    "vars": vars,
                    "components": components.to_texts(vars),
                });
                if let Some(t) = top_degree {
                    v["top_degree"] = Value::String(t.to_string());
                }
                v
            }
        }
    }

    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(&self.canonical_json()).expect("serializable");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// Projectivization of `x ↦ x^A` over `Q` in variables `x0, ..., xd`, with
/// `x0` the homogenizing coordinate and `top_degree = |det A|`.
pub fn homogenize_monomial(matrix: &[Vec<BigInt>]) -> Result<MapSpec, OracleError> {
    let d = matrix.len();
    let to_i64 = |e: &BigInt| e.to_i64().ok_or_else(|| bad("matrix entry too large to homogenize"));
    // affine exponent vectors of the components 1, x^{A_1}, ..., x^{A_d}
    let mut exps: Vec<Vec<i64>> = vec![vec![0; d]];
    for row in matrix {
        exps.push(row.iter().map(to_i64).collect::<Result<_, _>>()?);
    }
    for k in 0..d {
        let min = exps.iter().map(|e| e[k]).min().unwrap();
        for e in exps.iter_mut() {
            e[k] -= min;
        }
    }
    let total = exps.iter().map(|e| e.iter().sum::<i64>()).max().unwrap();
    let comps = exps
        .iter()
        .map(|e| {
            let mut full = vec![(total - e.iter().sum::<i64>()) as u32];
            full.extend(e.iter().map(|&x| x as u32));
            HomPoly::from_terms(d + 1, Field::Q, vec![(full, BigInt::one())])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let vars: Vec<String> = (0..=d).map(|k| format!("x{k}")).collect();
    let top = det(matrix.to_vec()).abs();
    MapSpec::projective(vars, ProjComponents::new(comps)?, Some(top))
}
