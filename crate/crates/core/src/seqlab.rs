//! Degree-sequence laboratory: a submultiplicative sequence with exponential
//! growth whose growth along arithmetic progressions is not uniform, plus
//! exact submultiplicativity, Fekete and flat-window diagnostics.
//!
//! Sequences of the form `A_n = 2^{e_n}` are stored through their exponents,
//! which keeps every check exact without materialising huge integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactnum::{binomial, nth_root_enclosure, serde_rational, Rational};
use crate::oracle::{MixedDegreeOracle, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Generated,
    FromOracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Terms {
    Values(Vec<Rational>),
    /// `A_n = 2^{e_n}`
    PowersOfTwo(Vec<Rational>),
}

/// Terms `A_0, A_1, ..., A_N` of a positive sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqSample {
    terms: Terms,
    /// increments `a_n = e_n - e_{n-1}` when the sample is generated from them
    increments: Option<Vec<Rational>>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeqRow {
    pub n: u64,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub exponent: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmultiplicativeReport {
    pub holds: bool,
    pub pairs_checked: u64,
    /// first `(m, n)` with `A_{m+n} > A_m A_n`, scanning `m + n` upwards
    pub witness: Option<(u64, u64)>,
}

impl SeqSample {
    pub fn from_values(values: Vec<Rational>, provenance: Provenance) -> Result<Self, SeqError> {
        if values.iter().any(|v| !v.is_positive()) {
            return Err(SeqError::Domain("terms must be positive".into()));
        }
        if provenance == Provenance::FromOracle && values.iter().any(|v| *v < Rational::one()) {
            return Err(SeqError::Domain("degree sequences are at least 1".into()));
        }
        Ok(SeqSample { terms: Terms::Values(values), increments: None, provenance })
    }

    /// `A_n = 2^{e_n}` from the exponents `e_0, e_1, ...`.
    pub fn from_exponents(exponents: Vec<Rational>, provenance: Provenance) -> Self {
        SeqSample { terms: Terms::PowersOfTwo(exponents), increments: None, provenance }
    }

    /// `C(d,i) deg_i(f^n)` for `n = 0..=n_max` (the self-intersection of a
    /// hyperplane in projective space is 1).
    pub fn from_oracle(oracle: &dyn MixedDegreeOracle, i: usize, n_max: u64) -> Result<Self, SeqError> {
        let c = binomial(oracle.dim() as u64, i as i64);
        let values = (0..=n_max)
            .map(|n| Ok(Rational::from_integer(&c * oracle.degree(i, n)?)))
            .collect::<Result<Vec<_>, OracleError>>()?;
        Self::from_values(values, Provenance::FromOracle)
    }

    /// Largest index `N`.
    pub fn n_max(&self) -> u64 {
        self.len() as u64 - 1
    }

    fn len(&self) -> usize {
        match &self.terms {
            Terms::Values(v) | Terms::PowersOfTwo(v) => v.len(),
        }
    }

    pub fn exponents(&self) -> Option<&[Rational]> {
        match &self.terms {
            Terms::PowersOfTwo(e) => Some(e),
            Terms::Values(_) => None,
        }
    }

    pub fn increments(&self) -> Option<&[Rational]> {
        self.increments.as_deref()
    }

    /// `(n, a_n, e_n)` for `n >= 1` when the sample was built from increments.
    pub fn rows(&self) -> Vec<SeqRow> {
        match (&self.increments, &self.terms) {
            (Some(a), Terms::PowersOfTwo(e)) => (1..e.len())
                .map(|n| SeqRow { n: n as u64, a: a[n].clone(), exponent: e[n].clone() })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn equal_terms(&self, p: usize, q: usize) -> bool {
        match &self.terms {
            Terms::Values(v) => v[p] == v[q],
            Terms::PowersOfTwo(e) => e[p] == e[q],
        }
    }

    /// `A_n^{1/n}` as `2^{e_n/n}` or `(A_n)^{1/n}`, compared exactly where possible.
    fn root_upper(&self, n: usize, tol: &Rational) -> Rational {
        match &self.terms {
            Terms::Values(v) => nth_root_enclosure(&v[n], n as u64, tol).expect("positive").upper,
            Terms::PowersOfTwo(e) => pow2_upper(&(&e[n] / Rational::from_integer(BigInt::from(n))), tol),
        }
    }
}

/// Rational upper bound `U >= 2^x` with `U - 2^x <= tol`.
///
/// `x` is rounded up to a dyadic `c/2^s`, and `2^{c/2^s}` is assembled from
/// repeated square roots of 2 in fixed point, every step rounded upwards.
fn pow2_upper(x: &Rational, tol: &Rational) -> Rational {
    let mut tb = 0u64;
    while Rational::new(BigInt::one(), BigInt::one() << tb) > *tol {
        tb += 1;
    }
    let whole = x.ceil().to_integer();
    let s = tb + whole.magnitude().bits() + 4;
    let f = 2 * s + 16;
    let c = (x * Rational::from_integer(BigInt::one() << s)).ceil().to_integer();
    let (q, r) = c.div_mod_floor(&(BigInt::one() << s));
    let unit = BigInt::one() << f;
    let mut acc = unit.clone();
    let mut root = BigInt::from(2) << f;
    for j in 1..=s {
        root = (&root << f).sqrt() + 1u32;
        if r.bit(s - j) {
            acc = (&acc * &root + &unit - 1u32) >> f;
        }
    }
    let scale = Rational::new(acc, unit);
    let q = q.to_i64().expect("exponent fits in i64");
    if q >= 0 {
        scale * Rational::from_integer(BigInt::one() << q as u64)
    } else {
        scale / Rational::from_integer(BigInt::one() << q.unsigned_abs())
    }
}

/// Increments `a_n` of the counterexample sequence for `n = 1..=n_max` (index 0 unused).
///
/// `a_1..a_6 = 1`, `a_7..a_9 = 0`; for `r >= 1` the block `[(r+2)!+r+3, (r+3)!]`
/// is constant `(1 - 1/(r+1)!) a_{(r+2)!}` and `[(r+3)!+1, (r+3)!+r+3]` is zero.
pub fn counterexample_increments(n_max: u64) -> Vec<Rational> {
    let n_max = n_max as usize;
    let mut a = vec![Rational::zero(); n_max + 1];
    for (n, slot) in a.iter_mut().enumerate().skip(1).take(9) {
        *slot = if n <= 6 { Rational::one() } else { Rational::zero() };
    }
    let mut r = 1usize;
    loop {
        let f_r1 = factorial(r + 1);
        let f_r2 = factorial(r + 2);
        let f_r3 = factorial(r + 3);
        let start = f_r2 + r + 3;
        if start > n_max {
            break;
        }
        let value = (Rational::one() - Rational::new(BigInt::one(), BigInt::from(f_r1))) * a[f_r2].clone();
        for slot in a.iter_mut().take(f_r3.min(n_max) + 1).skip(start) {
            *slot = value.clone();
        }
        // the zero block is already zero
        r += 1;
    }
    a
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// `A_n = 2^{Σ_{j<=n} a_j}` for `n = 0..=n_max`.
pub fn counterexample_sequence(n_max: u64) -> Result<SeqSample, SeqError> {
    if n_max < 1 {
        return Err(SeqError::Domain("n_max must be at least 1".into()));
    }
    let a = counterexample_increments(n_max);
    let mut e = Vec::with_capacity(a.len());
    let mut acc = Rational::zero();
    e.push(acc.clone());
    for x in &a[1..] {
        acc += x;
        e.push(acc.clone());
    }
    Ok(SeqSample { terms: Terms::PowersOfTwo(e), increments: Some(a), provenance: Provenance::Generated })
}

/// Exhaustive exact check of `A_{m+n} <= A_m A_n` for `1 <= m <= n`, `m + n <= N`.
pub fn check_submultiplicative(s: &SeqSample) -> SubmultiplicativeReport {
    let len = s.len();
    let mut checked = 0u64;
    let witness = match &s.terms {
        Terms::PowersOfTwo(e) => {
            let scaled = common_scale(e);
            match scaled.iter().map(|x| x.to_i128()).collect::<Option<Vec<i128>>>() {
                Some(small) => scan(len, &mut checked, |m, n| small[m + n] > small[m] + small[n]),
                None => scan(len, &mut checked, |m, n| scaled[m + n] > &scaled[m] + &scaled[n]),
            }
        }
        Terms::Values(v) => scan(len, &mut checked, |m, n| v[m + n] > &v[m] * &v[n]),
    };
    SubmultiplicativeReport { holds: witness.is_none(), pairs_checked: checked, witness }
}

fn scan(len: usize, checked: &mut u64, violates: impl Fn(usize, usize) -> bool) -> Option<(u64, u64)> {
    for total in 2..len {
        for m in 1..=total / 2 {
            *checked += 1;
            if violates(m, total - m) {
                return Some((m as u64, (total - m) as u64));
            }
        }
    }
    None
}

/// Integers `e_n · L` for the least common denominator `L`.
fn common_scale(e: &[Rational]) -> Vec<BigInt> {
    let l = e.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    e.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Certified upper bound for `lim A_n^{1/n}`: the least `A_n^{1/n}` over the
/// sample, enclosed from above to within `tol`.
pub fn fekete_estimate(s: &SeqSample, tol: &Rational) -> Result<Rational, SeqError> {
    if s.len() < 2 {
        return Err(SeqError::Domain("need at least A_1".into()));
    }
    let report = check_submultiplicative(s);
    if let Some((m, n)) = report.witness {
        return Err(SeqError::Domain(format!("not submultiplicative at ({m}, {n})")));
    }
    let best = match &s.terms {
        // 2^x is increasing, so the minimiser of e_n / n is exact
        Terms::PowersOfTwo(e) => {
            let n = (1..e.len())
                .min_by(|&p, &q| (&e[p] / Rational::from_integer(p.into())).cmp(&(&e[q] / Rational::from_integer(q.into()))))
                .expect("nonempty");
            s.root_upper(n, tol)
        }
        Terms::Values(_) => (1..s.len()).map(|n| s.root_upper(n, tol)).min().expect("nonempty"),
    };
    Ok(best)
}

/// First `n` in `1..` where `a_{n+1} > (Σ_{j<=n} a_j) / n`.
pub fn check_averaging_bound(s: &SeqSample) -> Option<u64> {
    let (a, e) = (s.increments()?, s.exponents()?);
    (1..a.len() - 1).find(|&n| a[n + 1] > &e[n] / Rational::from_integer(n.into())).map(|n| n as u64)
}

/// Smallest `n >= 1` with `A_{m(n+1)} = A_{mn}` inside the sample.
pub fn flat_window(s: &SeqSample, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let m = m as usize;
    (1..).take_while(|n| m * (n + 1) < s.len()).find(|&n| s.equal_terms(m * n, m * (n + 1))).map(|n| n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ints(v: &[i64]) -> SeqSample {
        SeqSample::from_values(v.iter().map(|&x| Rational::from_integer(x.into())).collect(), Provenance::Generated)
            .unwrap()
    }

    #[test]
    fn base_blocks() {
        let a = counterexample_increments(30);
        assert!(a[1..=6].iter().all(|x| x.is_one()));
        assert!(a[7..=9].iter().all(|x| x.is_zero()));
        assert!(a[10..=24].iter().all(|x| *x == r("1/2")));
        assert!(a[25..=28].iter().all(|x| x.is_zero()));
        assert_eq!(a[29], r("5/12"));
    }

    #[test]
    fn blocks_tile_without_overlap() {
        let a = counterexample_increments(6000);
        // r = 3: constant on [126, 720] with value (1 - 1/24) a_120 = 23/24 * 5/12
        assert_eq!(a[126], r("115/288"));
        assert_eq!(a[720], a[126]);
        assert!(a[721..=726].iter().all(|x| x.is_zero()));
        assert_eq!(a[727], &a[720] * r("119/120"));
        assert!(a[5041..=5047].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn small_examples() {
        let s = counterexample_sequence(100).unwrap();
        assert!(check_submultiplicative(&s).holds);
        let pow: Vec<i64> = (0..20).map(|n| 1i64 << n).collect();
        assert!(check_submultiplicative(&ints(&pow)).holds);
        let bad = check_submultiplicative(&ints(&[1, 1, 3]));
        assert_eq!(bad.witness, Some((1, 1)));
        assert!(counterexample_sequence(0).is_err());
    }

    #[test]
    fn fekete_examples() {
        let tol = r("1/1024");
        let pow: Vec<i64> = (0..12).map(|n| 1i64 << n).collect();
        assert_eq!(fekete_estimate(&ints(&pow), &tol).unwrap(), r("2"));
        assert_eq!(fekete_estimate(&ints(&[1; 8]), &tol).unwrap(), r("1"));
        assert!(fekete_estimate(&ints(&[1, 1, 3]), &tol).is_err());
        let pow2 = SeqSample::from_exponents((0..12).map(|n| Rational::from_integer(n.into())).collect(), Provenance::Generated);
        assert_eq!(fekete_estimate(&pow2, &tol).unwrap(), r("2"));
    }

    #[test]
    fn fekete_is_non_increasing_and_above_limit() {
        let tol = r("1/65536");
        let mut prev: Option<Rational> = None;
        for n_max in [50u64, 100, 200, 400] {
            let est = fekete_estimate(&counterexample_sequence(n_max).unwrap(), &tol).unwrap();
            assert!(est > Rational::one());
            if let Some(p) = &prev {
                assert!(est <= *p);
            }
            prev = Some(est);
        }
    }

    #[test]
    fn averaging_bound_and_flat_windows() {
        let s = counterexample_sequence(800).unwrap();
        assert_eq!(check_averaging_bound(&s), None);
        assert_eq!(flat_window(&s, 3), Some(2));
        assert_eq!(flat_window(&s, 4), Some(6));
        assert_eq!(flat_window(&s, 5), Some(24));
        for m in 1..=5 {
            let n = flat_window(&s, m).unwrap() as usize;
            let e = s.exponents().unwrap();
            assert_eq!(e[m as usize * n], e[m as usize * (n + 1)]);
        }
    }

    #[test]
    fn pow2_bounds() {
        let tol = r("1/4096");
        for (x, lo, hi) in [("1/2", "1414/1000", "1415/1000"), ("-3/2", "3535/10000", "3536/10000"), ("10/3", "10079/1000", "10080/1000")] {
            let u = pow2_upper(&r(x), &tol);
            assert!(r(lo) < u && u < r(hi) + &tol, "{x}: {u}");
        }
        assert_eq!(pow2_upper(&r("3"), &tol), r("8"));
    }

    #[test]
    fn rows_carry_exponents() {
        let s = counterexample_sequence(12).unwrap();
        let rows = s.rows();
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[5].exponent, r("6"));
        assert_eq!(rows[8].exponent, r("6"));
        assert_eq!(rows[11].exponent, r("15/2"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn geometric_sequences_are_submultiplicative(k in 1u32..6, len in 3usize..40) {
                let e: Vec<Rational> = (0..len).map(|n| Rational::new(BigInt::from(n), BigInt::from(k))).collect();
                let s = SeqSample::from_exponents(e, Provenance::Generated);
                prop_assert!(check_submultiplicative(&s).holds);
            }

            #[test]
            fn superlinear_exponents_violate(len in 3usize..30) {
                let e: Vec<Rational> = (0..len).map(|n| Rational::from_integer(BigInt::from(n * n))).collect();
                let s = SeqSample::from_exponents(e, Provenance::Generated);
                prop_assert_eq!(check_submultiplicative(&s).witness, Some((1, 1)));
            }
        }
    }
}
