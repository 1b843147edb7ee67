//! Mixed-degree oracles.
//!
//! A mixed degree `(L_{m_1}^{r_1} ··· L_{m_s}^{r_s})` is an intersection number of
//! pullbacks `L_m = (f^m)^* O(1)` on `P^d`. Two backends exist: monomial maps,
//! where every query is a normalized mixed volume, and general projective maps,
//! where only first degrees (and the topological degree, when supplied) are known.
//! The top self-intersection `(L^d)` is 1 throughout.

mod map;
mod monomial;
mod projective;
mod query;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

pub use map::{homogenize_monomial, MapSpec};
pub use monomial::MonomialOracle;
pub use projective::ProjectiveOracle;
pub use query::MixedDegreeQuery;
pub use validate::{validate_oracle, ValidationReport, Violation};

use crate::polyring::{Budget, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl From<PolyError> for OracleError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Budget(msg) => OracleError::Budget(msg),
            other => OracleError::InvalidMap(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capability {
    Supported,
    Unsupported(String),
}

impl Capability {
    pub fn is_supported(&self) -> bool {
        matches!(self, Capability::Supported)
    }
}

/// Query results shared between threads. Values are deterministic, so racing
/// writers always store the same integer.
#[derive(Debug, Default)]
pub struct QueryCache {
    entries: RwLock<HashMap<MixedDegreeQuery, BigInt>>,
}

impl QueryCache {
    pub fn get(&self, q: &MixedDegreeQuery) -> Option<BigInt> {
        self.entries.read().expect("cache lock").get(q).cloned()
    }

    pub fn insert(&self, q: MixedDegreeQuery, value: BigInt) {
        self.entries.write().expect("cache lock").insert(q, value);
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries keyed by `MixedDegreeQuery::key`, sorted.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        self.entries
            .read()
            .expect("cache lock")
            .iter()
            .map(|(q, v)| (q.key(), v.to_string()))
            .collect()
    }
}

pub trait MixedDegreeOracle: Send + Sync {
    fn dim(&self) -> usize;

    /// sha256 of the canonical map JSON.
    fn fingerprint(&self) -> &str;

    fn backend(&self) -> &'static str;

    fn capability(&self, q: &MixedDegreeQuery) -> Capability;

    /// Evaluates a query, consulting and filling the cache.
    fn mixed_degree(&self, q: &MixedDegreeQuery) -> Result<BigInt, OracleError>;

    fn cache(&self) -> &QueryCache;

    /// Whether arbitrary queries are supported (as opposed to first and top degrees only).
    fn general_queries(&self) -> bool;

    /// Set when values come from the mixed-volume formula without an
    /// independent cross-check (monomial maps in dimension 4 and up).
    fn formula_level(&self) -> bool {
        false
    }

    /// `deg_i(f^n)`; `deg_0 = deg_i(f^0) = 1`.
    fn degree(&self, i: usize, n: u64) -> Result<BigInt, OracleError> {
        let d = self.dim();
        if i > d {
            return Err(OracleError::InvalidQuery(format!("degree index {i} exceeds dimension {d}")));
        }
        if i == 0 || n == 0 {
            return Ok(BigInt::one());
        }
        self.mixed_degree(&MixedDegreeQuery::first(d, n, i)?)
    }

    fn degree_capability(&self, i: usize, n: u64) -> Capability {
        let d = self.dim();
        if i > d {
            return Capability::Unsupported(format!("degree index {i} exceeds dimension {d}"));
        }
        if i == 0 || n == 0 {
            return Capability::Supported;
        }
        match MixedDegreeQuery::first(d, n, i) {
            Ok(q) => self.capability(&q),
            Err(e) => Capability::Unsupported(e.to_string()),
        }
    }
}

/// Oracle configuration. The polynomial budget only affects projective maps.
#[derive(Debug, Clone, Default)]
pub struct OracleConfig {
    pub budget: Budget,
}

pub fn oracle_for(spec: &MapSpec, config: &OracleConfig) -> Result<Arc<dyn MixedDegreeOracle>, OracleError> {
    Ok(match spec {
        MapSpec::Monomial { .. } => Arc::new(MonomialOracle::new(spec)?),
        MapSpec::Projective { .. } => Arc::new(ProjectiveOracle::new(spec, config.budget.clone())?),
    })
}

/// Cache file contents: `{"fingerprint": ..., "entries": {"m^r,...": "value"}}`.
pub fn export_cache(oracle: &dyn MixedDegreeOracle) -> Value {
    json!({ "fingerprint": oracle.fingerprint(), "entries": oracle.cache().snapshot() })
}

/// Loads a cache file written by `export_cache`. Files for a different map are
/// ignored; returns the number of entries loaded.
pub fn preload_cache(oracle: &dyn MixedDegreeOracle, data: &Value) -> Result<usize, OracleError> {
    if data.get("fingerprint").and_then(Value::as_str) != Some(oracle.fingerprint()) {
        return Ok(0);
    }
    let entries = data
        .get("entries")
        .and_then(Value::as_object)
        .ok_or_else(|| OracleError::InvalidQuery("cache file without entries".into()))?;
    let mut loaded = 0;
    for (key, value) in entries {
        let q = MixedDegreeQuery::parse_key(oracle.dim(), key)?;
        let v: BigInt = value
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| OracleError::InvalidQuery(format!("bad cached value for {key}")))?;
        oracle.cache().insert(q, v);
        loaded += 1;
    }
    Ok(loaded)
}
