use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Capability, MapSpec, MixedDegreeOracle, MixedDegreeQuery, OracleError, QueryCache};
use crate::polytope::{mixed_volume_grouped, Polytope};
use crate::scalar::ExactScalar;

type Matrix = Vec<Vec<BigInt>>;

/// Mixed degrees of `x ↦ x^A` as normalized mixed volumes of the polytopes
/// `P_m = conv(0, rows of A^m)`; `P_0` is the standard simplex.
#[derive(Debug)]
pub struct MonomialOracle {
    matrix: Matrix,
    fingerprint: String,
    powers: Mutex<HashMap<u64, Matrix>>,
    cache: QueryCache,
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl MonomialOracle {
    pub fn new(spec: &MapSpec) -> Result<Self, OracleError> {
        let MapSpec::Monomial { matrix } = spec else {
            return Err(OracleError::InvalidMap("monomial backend needs a monomial map".into()));
        };
        Ok(MonomialOracle {
            matrix: matrix.clone(),
            fingerprint: spec.fingerprint(),
            powers: Mutex::new(HashMap::new()),
            cache: QueryCache::default(),
        })
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    /// `A^m` by repeated squaring, memoized.
    pub fn power(&self, m: u64) -> Matrix {
        if let Some(p) = self.powers.lock().expect("power lock").get(&m) {
            return p.clone();
        }
        let mut result = identity(self.matrix.len());
        let mut base = self.matrix.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = mat_mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mat_mul(&base, &base);
            }
        }
        self.powers.lock().expect("power lock").insert(m, result.clone());
        result
    }

    fn points(&self, m: u64) -> Vec<Vec<BigInt>> {
        let d = self.matrix.len();
        let mut pts = vec![vec![BigInt::zero(); d]];
        pts.extend(self.power(m));
        pts
    }

    fn evaluate<S: ExactScalar>(
        &self,
        groups: &[(Vec<Vec<BigInt>>, usize)],
        convert: impl Fn(&BigInt) -> S,
    ) -> Result<BigInt, OracleError> {
        let polys = groups
            .iter()
            .map(|(pts, r)| {
                let pts: Vec<Vec<S>> = pts.iter().map(|p| p.iter().map(&convert).collect()).collect();
                Polytope::convex_hull(&pts).map(|p| (p, *r))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| OracleError::InvalidQuery(e.to_string()))?;
        let mv = mixed_volume_grouped(&polys).map_err(|e| OracleError::InvalidQuery(e.to_string()))?;
        if !mv.is_integer() {
            return Err(OracleError::InvalidMap(format!("non-integral mixed volume {mv}")));
        }
        Ok(mv.to_integer())
    }
}

/// Whether every determinant formed from coordinates of `Σ r_k P_k` fits in `i128`.
fn fits_i128(groups: &[(Vec<Vec<BigInt>>, usize)], d: usize) -> bool {
    let mut bound = BigInt::zero();
    for (pts, r) in groups {
        let max = pts.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
        bound += max * BigInt::from(*r);
    }
    let bits = (bound * 2u32 + 1u32).bits() as usize;
    let log_d = usize::BITS as usize - d.leading_zeros() as usize;
    (d + 1) * bits + d * log_d + 8 <= 120
}

impl MixedDegreeOracle for MonomialOracle {
    fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn backend(&self) -> &'static str {
        "monomial"
    }

    fn capability(&self, q: &MixedDegreeQuery) -> Capability {
        if q.dim() == self.dim() {
            Capability::Supported
        } else {
            Capability::Unsupported(format!("query of dimension {} for a map of dimension {}", q.dim(), self.dim()))
        }
    }

    fn mixed_degree(&self, q: &MixedDegreeQuery) -> Result<BigInt, OracleError> {
        let d = self.dim();
        if q.dim() != d {
            return Err(OracleError::InvalidQuery(format!("exponents sum to {}, expected {d}", q.dim())));
        }
        if let Some(v) = self.cache.get(q) {
            return Ok(v);
        }
        let value = match q.as_degree() {
            Some((i, n)) if i == d => {
                let det = crate::polytope::det(self.matrix.clone()).abs();
                num_traits::pow(det, n as usize)
            }
            _ if q.parts() == [(0, d)] => BigInt::one(),
            _ => {
                let groups: Vec<(Vec<Vec<BigInt>>, usize)> = q.parts().iter().map(|&(m, r)| (self.points(m), r)).collect();
                if fits_i128(&groups, d) {
                    self.evaluate::<i128>(&groups, |x| i128::try_from(x).expect("bounded coordinate"))?
                } else {
                    self.evaluate::<BigInt>(&groups, BigInt::clone)?
                }
            }
        };
        self.cache.insert(q.clone(), value.clone());
        Ok(value)
    }

    fn cache(&self) -> &QueryCache {
        &self.cache
    }

    fn general_queries(&self) -> bool {
        true
    }

    fn formula_level(&self) -> bool {
        self.dim() >= 4
    }
}
