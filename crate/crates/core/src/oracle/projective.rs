use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use super::{Capability, MapSpec, MixedDegreeOracle, MixedDegreeQuery, OracleError, QueryCache};
use crate::polyring::{Budget, LineIterator, PolyError, ProjComponents};

const LINE_SEED: u64 = 0x5eed;
const UNSUPPORTED: &str = "general mixed degrees need graph intersection theory";

/// First degrees of a projective map by exact composition with content
/// removal, switching to line-certified modular images once the exact
/// iterates exceed the budget. `deg_d` comes from the user-supplied top degree.
#[derive(Debug)]
pub struct ProjectiveOracle {
    f: ProjComponents,
    top_degree: Option<BigInt>,
    fingerprint: String,
    budget: Budget,
    state: Mutex<Iterates>,
    cache: QueryCache,
}

#[derive(Debug)]
struct Iterates {
    /// `deg_1(f^k)` for `k < degrees.len()`
    degrees: Vec<BigInt>,
    exact: usize,
    current: ProjComponents,
    line: Option<LineIterator>,
    stopped: Option<OracleError>,
}

impl ProjectiveOracle {
    pub fn new(spec: &MapSpec, budget: Budget) -> Result<Self, OracleError> {
        let MapSpec::Projective { components, top_degree, .. } = spec else {
            return Err(OracleError::InvalidMap("projective backend needs a projective map".into()));
        };
        let state = Iterates {
            degrees: vec![BigInt::one()],
            exact: 0,
            current: ProjComponents::identity(components.nvars(), components.field()),
            line: None,
            stopped: None,
        };
        Ok(ProjectiveOracle {
            f: components.clone(),
            top_degree: top_degree.clone(),
            fingerprint: spec.fingerprint(),
            budget,
            state: Mutex::new(state),
            cache: QueryCache::default(),
        })
    }

    /// Number of iterates obtained by exact composition so far.
    pub fn exact_iterates(&self) -> usize {
        self.state.lock().expect("iterate lock").exact
    }

    /// `deg_1(f^n)`.
    pub fn first_degree(&self, n: u64) -> Result<BigInt, OracleError> {
        let n = usize::try_from(n).map_err(|_| OracleError::Budget(format!("iterate {n} out of reach")))?;
        let mut st = self.state.lock().expect("iterate lock");
        while st.degrees.len() <= n {
            if let Some(e) = &st.stopped {
                return Err(e.clone());
            }
            if st.line.is_none() {
                match self.f.compose(&st.current, &self.budget) {
                    Ok(next) => {
                        st.degrees.push(BigInt::from(next.degree()));
                        st.current = next;
                        st.exact += 1;
                        continue;
                    }
                    Err(PolyError::Budget(_)) => {
                        st.line = Some(LineIterator::new(&self.f, &st.current, LINE_SEED));
                    }
                    Err(e) => {
                        st.stopped = Some(e.into());
                        continue;
                    }
                }
            }
            let line = st.line.as_mut().expect("line mode");
            let next_degree = line.raw_degree() * BigInt::from(self.f.degree());
            if next_degree > BigInt::from(self.budget.max_line_degree) {
                st.stopped = Some(OracleError::Budget(format!(
                    "iterate {} has line images of degree {next_degree}, over the limit {}",
                    st.degrees.len(),
                    self.budget.max_line_degree
                )));
                continue;
            }
            let next = match line.step() {
                Ok(()) => line.certified_degree().ok_or_else(|| {
                    OracleError::Budget(format!(
                        "iterate {} over the exact budget and its line image is not certified content-free",
                        st.degrees.len()
                    ))
                }),
                Err(e) => Err(e.into()),
            };
            match next {
                Ok(deg) => st.degrees.push(deg),
                Err(e) => st.stopped = Some(e),
            }
        }
        Ok(st.degrees[n].clone())
    }
}

impl MixedDegreeOracle for ProjectiveOracle {
    fn dim(&self) -> usize {
        self.f.nvars() - 1
    }

    fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn backend(&self) -> &'static str {
        "projective"
    }

    fn capability(&self, q: &MixedDegreeQuery) -> Capability {
        let d = self.dim();
        if q.dim() != d {
            return Capability::Unsupported(format!("query of dimension {} for a map of dimension {d}", q.dim()));
        }
        match q.as_degree() {
            _ if q.parts() == [(0, d)] => Capability::Supported,
            Some((1, _)) => Capability::Supported,
            Some((i, _)) if i == d && self.top_degree.is_some() => Capability::Supported,
            Some((i, _)) if i == d => {
                Capability::Unsupported("the topological degree needs top_degree in the map file".into())
            }
            _ => Capability::Unsupported(UNSUPPORTED.into()),
        }
    }

    fn mixed_degree(&self, q: &MixedDegreeQuery) -> Result<BigInt, OracleError> {
        if let Capability::Unsupported(reason) = self.capability(q) {
            return Err(OracleError::Unsupported(reason));
        }
        if let Some(v) = self.cache.get(q) {
            return Ok(v);
        }
        let d = self.dim();
        let value = match q.as_degree() {
            None => BigInt::one(),
            Some((1, n)) => self.first_degree(n)?,
            Some((_, n)) => {
                let top = self.top_degree.clone().expect("capability checked");
                num_traits::pow(top, usize::try_from(n).map_err(|_| OracleError::Budget("iterate too large".into()))?)
            }
        };
        debug_assert!(q.as_degree().is_some() || q.parts() == [(0, d)]);
        self.cache.insert(q.clone(), value.clone());
        Ok(value)
    }

    fn cache(&self) -> &QueryCache {
        &self.cache
    }

    fn general_queries(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::homogenize_monomial;

    fn spec(json: &str) -> MapSpec {
        MapSpec::from_json_str(json).unwrap()
    }

    #[test]
    fn henon_first_degrees() {
        let s = spec(r#"{"kind":"projective","vars":["x","y","z"],"components":["y*z","y^2-x*z+z^2","z^2"]}"#);
        let o = ProjectiveOracle::new(&s, Budget::default()).unwrap();
        assert_eq!(o.degree(1, 5).unwrap(), BigInt::from(32));
        assert_eq!(o.degree(0, 5).unwrap(), BigInt::one());
        assert!(!o.degree_capability(2, 1).is_supported());
        let q = MixedDegreeQuery::new(2, &[(3, 1), (1, 1)]).unwrap();
        assert_eq!(o.capability(&q), Capability::Unsupported(UNSUPPORTED.into()));
        assert!(matches!(o.mixed_degree(&q), Err(OracleError::Unsupported(_))));
    }

    #[test]
    fn line_mode_continues_past_budget() {
        let s = spec(r#"{"kind":"projective","vars":["x","y","z"],"components":["y*z","y^2-x*z+z^2","z^2"]}"#);
        let tight = Budget { max_terms: 300, ..Budget::default() };
        let o = ProjectiveOracle::new(&s, tight).unwrap();
        assert_eq!(o.degree(1, 11).unwrap(), BigInt::from(2048));
        assert!(o.exact_iterates() < 11);
    }

    #[test]
    fn line_mode_stops_at_degree_limit() {
        let s = spec(r#"{"kind":"projective","vars":["x","y","z"],"components":["y*z","y^2-x*z+z^2","z^2"]}"#);
        let tight = Budget { max_terms: 300, max_line_degree: 1024, ..Budget::default() };
        let o = ProjectiveOracle::new(&s, tight).unwrap();
        assert_eq!(o.degree(1, 10).unwrap(), BigInt::from(1024));
        assert!(matches!(o.degree(1, 11), Err(OracleError::Budget(_))));
        assert!(matches!(o.degree(1, 12), Err(OracleError::Budget(_))));
    }

    #[test]
    fn top_degree_powers() {
        let s = spec(r#"{"kind":"projective","vars":["x","y","z"],"components":["x^2","y^2","z^2"],"top_degree":4}"#);
        let o = ProjectiveOracle::new(&s, Budget::default()).unwrap();
        assert_eq!(o.degree(2, 3).unwrap(), BigInt::from(64));
        assert_eq!(o.degree(1, 3).unwrap(), BigInt::from(8));
    }

    #[test]
    fn agrees_with_homogenized_monomial() {
        let m = vec![vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]];
        let p = ProjectiveOracle::new(&homogenize_monomial(&m).unwrap(), Budget::default()).unwrap();
        let fib = [2, 3, 5, 8, 13, 21, 34];
        for (n, want) in fib.iter().enumerate() {
            assert_eq!(p.degree(1, n as u64 + 1).unwrap(), BigInt::from(*want));
        }
    }
}
