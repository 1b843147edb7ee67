//! Sparse homogeneous polynomials over Q and F_p.
//!
//! Over Q a polynomial carries integer coefficients; rational input is cleared
//! of denominators when a tuple of components is built, which is harmless
//! because tuples are only meaningful up to a common scalar. Over F_p
//! coefficients are kept reduced to `[0, p)`.
//!
//! Terms are stored in graded lexicographic order, largest first. Since every
//! term of a homogeneous polynomial has the same total degree this is the
//! lexicographic order on exponent vectors.

mod dominance;
mod gcd;
mod line;
mod parse;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use dominance::{is_dominant, jacobian_determinant};
pub use line::LineIterator;
pub use parse::parse_terms;

use crate::exactnum::Rational;

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => *p,
        }
    }

    pub(crate) fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Field::Q => c,
            Field::Fp(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }

    /// Image of a rational in the field; `None` when the denominator is not invertible.
    pub fn from_rational(&self, q: &Rational) -> Option<BigInt> {
        match self {
            Field::Q => q.is_integer().then(|| q.numer().clone()),
            Field::Fp(p) => {
                let p = BigInt::from(*p);
                let den = q.denom().mod_floor(&p);
                if den.is_zero() {
                    return None;
                }
                let inv = den.modpow(&(&p - 2u32), &p);
                Some((q.numer() * inv).mod_floor(&p))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("components have different degrees")]
    DegreeMismatch,
    #[error("all components vanish; the composition lands in the indeterminacy locus")]
    Degenerate,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("map is not dominant (Jacobian determinant vanishes identically)")]
    NotDominant,
}

/// Work limits for exact composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of terms in any intermediate polynomial.
    pub max_terms: usize,
    /// Maximum number of coefficient products in one composition.
    pub max_products: u64,
    /// Largest tuple (in terms) handed to the exact gcd fallback.
    pub max_gcd_terms: usize,
    /// Largest degree of the univariate line images once exact composition
    /// has run out of budget.
    pub max_line_degree: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_terms: 5_000_000, max_products: 100_000_000, max_gcd_terms: 1_500, max_line_degree: 1 << 17 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_terms: usize::MAX, max_products: u64::MAX, max_gcd_terms: usize::MAX, max_line_degree: u64::MAX }
    }
}

/// Homogeneous polynomial with terms sorted largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    nvars: usize,
    field: Field,
    terms: Vec<(Exponents, BigInt)>,
}

const PACK_BITS: u32 = 16;

fn pack(e: &[u32]) -> u128 {
    e.iter().fold(0u128, |acc, &x| (acc << PACK_BITS) | x as u128)
}

fn unpack(mut key: u128, nvars: usize) -> Exponents {
    let mut out = vec![0u32; nvars];
    for slot in out.iter_mut().rev() {
        *slot = (key & ((1 << PACK_BITS) - 1)) as u32;
        key >>= PACK_BITS;
    }
    out
}

impl HomPoly {
    pub fn zero(nvars: usize, field: Field) -> Self {
        HomPoly { nvars, field, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, field: Field, c: BigInt) -> Self {
        HomPoly::from_terms(nvars, field, vec![(vec![0; nvars], c)]).expect("constant is homogeneous")
    }

    pub fn var(nvars: usize, field: Field, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        HomPoly { nvars, field, terms: vec![(e, BigInt::one())] }
    }

    /// Builds a polynomial from arbitrary terms: duplicates merged, coefficients
    /// reduced, zeros dropped, homogeneity checked.
    pub fn from_terms(nvars: usize, field: Field, terms: Vec<(Exponents, BigInt)>) -> Result<Self, PolyError> {
        let mut acc: HashMap<Exponents, BigInt> = HashMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::VarMismatch(nvars, e.len()));
            }
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let p = HomPoly::from_accumulator(nvars, field, acc);
        let mut degrees = p.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        if let Some(first) = degrees.next() {
            if degrees.any(|d| d != first) {
                return Err(PolyError::NotHomogeneous);
            }
        }
        Ok(p)
    }

    fn from_accumulator(nvars: usize, field: Field, acc: HashMap<Exponents, BigInt>) -> Self {
        let mut terms: Vec<(Exponents, BigInt)> = acc
            .into_iter()
            .map(|(e, c)| (e, field.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        HomPoly { nvars, field, terms }
    }

    /// Parses `c*x^a*y^b + ...` over the given variables. Over Q every coefficient
    /// must be an integer; use [`ProjComponents::parse`] for rational input.
    pub fn parse(text: &str, vars: &[String], field: Field) -> Result<Self, PolyError> {
        let raw = parse_terms(text, vars)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, q) in raw {
            let c = field
                .from_rational(&q)
                .ok_or_else(|| PolyError::Parse(format!("coefficient {q} is not an element of {field}")))?;
            terms.push((e, c));
        }
        HomPoly::from_terms(vars.len(), field, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[(Exponents, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| e.iter().sum())
    }

    fn check_compatible(&self, other: &HomPoly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::VarMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &HomPoly) -> Result<HomPoly, PolyError> {
        let mut work = 0u64;
        self.mul_budgeted(other, &Budget::unlimited(), &mut work)
    }

    pub(crate) fn mul_budgeted(&self, other: &HomPoly, budget: &Budget, work: &mut u64) -> Result<HomPoly, PolyError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(HomPoly::zero(self.nvars, self.field));
        }
        let products = self.len() as u64 * other.len() as u64;
        *work = work.saturating_add(products);
        if *work > budget.max_products {
            return Err(PolyError::Budget(format!("more than {} coefficient products", budget.max_products)));
        }
        let degree = self.degree().unwrap() + other.degree().unwrap();
        if self.nvars > 8 || degree >= 1 << PACK_BITS {
            return Err(PolyError::Budget(format!("degree {degree} in {} variables exceeds exact storage", self.nvars)));
        }
        let mut acc: HashMap<u128, BigInt> = HashMap::with_capacity(self.len().max(other.len()) * 4);
        let lhs: Vec<(u128, &BigInt)> = self.terms.iter().map(|(e, c)| (pack(e), c)).collect();
        for (eb, cb) in &other.terms {
            let kb = pack(eb);
            for (ka, ca) in &lhs {
                let prod = *ca * cb;
                match acc.entry(ka + kb) {
                    std::collections::hash_map::Entry::Occupied(mut slot) => *slot.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(prod);
                    }
                }
            }
        }
        if acc.len() > budget.max_terms {
            return Err(PolyError::Budget(format!("{} terms exceed the limit {}", acc.len(), budget.max_terms)));
        }
        let field = self.field;
        let mut terms: Vec<(Exponents, BigInt)> = acc
            .into_iter()
            .map(|(k, c)| (k, field.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (unpack(k, self.nvars), c))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(HomPoly { nvars: self.nvars, field, terms })
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly, PolyError> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree() != other.degree() {
            return Err(PolyError::NotHomogeneous);
        }
        let mut acc: HashMap<Exponents, BigInt> = HashMap::with_capacity(self.len() + other.len());
        for (e, c) in self.terms.iter().chain(&other.terms) {
            *acc.entry(e.clone()).or_insert_with(BigInt::zero) += c;
        }
        Ok(HomPoly::from_accumulator(self.nvars, self.field, acc))
    }

    pub fn neg(&self) -> HomPoly {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &HomPoly) -> Result<HomPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> HomPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.field.reduce(c * k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HomPoly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn pow(&self, e: u32) -> Result<HomPoly, PolyError> {
        let mut work = 0;
        self.pow_budgeted(e, &Budget::unlimited(), &mut work)
    }

    fn pow_budgeted(&self, e: u32, budget: &Budget, work: &mut u64) -> Result<HomPoly, PolyError> {
        let mut result = HomPoly::constant(self.nvars, self.field, BigInt::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_budgeted(&base, budget, work)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_budgeted(&base, budget, work)?;
            }
        }
        Ok(result)
    }

    pub fn derivative(&self, k: usize) -> HomPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[k] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[k] -= 1;
                (e2, self.field.reduce(c * BigInt::from(e[k])))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HomPoly { nvars: self.nvars, field: self.field, terms }
    }

    /// Value at a point of `Z/modulus`, coefficients reduced first.
    pub fn eval_mod(&self, point: &[u64], modulus: u64) -> u64 {
        let m = BigInt::from(modulus);
        let mut total = 0u64;
        for (e, c) in &self.terms {
            let mut v = c.mod_floor(&m).to_u64_digits().1.first().copied().unwrap_or(0);
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    v = mulmod(v, powmod(*x % modulus, k as u64, modulus), modulus);
                }
            }
            total = addmod(total, v, modulus);
        }
        total
    }

    pub fn to_text(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(mag.to_string());
            }
            for (v, &k) in vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{k}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    fn divide_monomial(&self, m: &[u32]) -> HomPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
            .collect();
        HomPoly { nvars: self.nvars, field: self.field, terms }
    }
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Large prime used for modular images of polynomials over Q.
pub(crate) const LINE_PRIME: u64 = (1 << 61) - 1;

/// Raw composition `F_i(G_0, ..., G_d)` without content removal.
pub fn compose_raw(f: &[HomPoly], g: &[HomPoly], budget: &Budget) -> Result<Vec<HomPoly>, PolyError> {
    let nvars_f = f.first().map(|p| p.nvars).unwrap_or(0);
    if g.len() != nvars_f {
        return Err(PolyError::VarMismatch(nvars_f, g.len()));
    }
    for p in f.iter().skip(1) {
        f[0].check_compatible(p)?;
    }
    for p in g.iter().skip(1) {
        g[0].check_compatible(p)?;
    }
    if f[0].field != g[0].field {
        return Err(PolyError::FieldMismatch(f[0].field, g[0].field));
    }
    let nvars = g[0].nvars;
    let field = g[0].field;
    let mut work = 0u64;
    let mut powers: HashMap<(usize, u32), HomPoly> = HashMap::new();
    let mut monomials: HashMap<Exponents, HomPoly> = HashMap::new();
    let mut out = Vec::with_capacity(f.len());
    for comp in f {
        let mut acc: HashMap<Exponents, BigInt> = HashMap::new();
        for (e, c) in &comp.terms {
            if !monomials.contains_key(e) {
                let mut prod = HomPoly::constant(nvars, field, BigInt::one());
                for (j, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    if !powers.contains_key(&(j, k)) {
                        let pw = g[j].pow_budgeted(k, budget, &mut work)?;
                        powers.insert((j, k), pw);
                    }
                    prod = prod.mul_budgeted(&powers[&(j, k)], budget, &mut work)?;
                }
                monomials.insert(e.clone(), prod);
            }
            for (me, mc) in &monomials[e].terms {
                *acc.entry(me.clone()).or_insert_with(BigInt::zero) += mc * c;
            }
        }
        if acc.len() > budget.max_terms {
            return Err(PolyError::Budget(format!("{} terms exceed the limit {}", acc.len(), budget.max_terms)));
        }
        out.push(HomPoly::from_accumulator(nvars, field, acc));
    }
    Ok(out)
}

/// Divides a tuple by the gcd of its components and normalizes the scalar.
///
/// Monomial and scalar content are stripped directly. The remaining gcd is
/// certified trivial by restricting to random lines modulo a prime, and computed
/// exactly only when that certificate is unavailable.
pub fn content_free(comps: &[HomPoly]) -> Result<Vec<HomPoly>, PolyError> {
    content_free_budgeted(comps, &Budget::unlimited())
}

pub(crate) fn content_free_budgeted(comps: &[HomPoly], budget: &Budget) -> Result<Vec<HomPoly>, PolyError> {
    let first = comps.iter().find(|p| !p.is_zero()).ok_or(PolyError::Degenerate)?;
    for p in comps {
        first.check_compatible(p)?;
    }
    let degree = first.degree();
    if comps.iter().any(|p| !p.is_zero() && p.degree() != degree) {
        return Err(PolyError::DegreeMismatch);
    }
    let nvars = first.nvars;
    let field = first.field;
    let mut min = vec![u32::MAX; nvars];
    for p in comps {
        for (e, _) in &p.terms {
            for (m, &x) in min.iter_mut().zip(e) {
                *m = (*m).min(x);
            }
        }
    }
    let mut out: Vec<HomPoly> = comps.iter().map(|p| p.divide_monomial(&min)).collect();
    normalize_scalar(&mut out);
    if !line_certifies_coprime(&out) {
        let size: usize = out.iter().map(|p| p.len()).sum();
        if size > budget.max_gcd_terms {
            return Err(PolyError::Budget(format!("exact gcd on {size} terms exceeds the limit {}", budget.max_gcd_terms)));
        }
        let g = gcd::tuple_gcd(&out);
        if g.degree().unwrap_or(0) > 0 {
            out = out.iter().map(|p| gcd::exact_quotient(p, &g)).collect();
            normalize_scalar(&mut out);
        }
    }
    debug_assert!(out.iter().all(|p| p.field == field));
    Ok(out)
}

/// Removes the integer content (Q) or makes the tuple monic (F_p), then fixes the
/// sign/scale by the leading coefficient of the first nonzero component.
fn normalize_scalar(comps: &mut [HomPoly]) {
    let Some(first) = comps.iter().find(|p| !p.is_zero()) else {
        return;
    };
    let field = first.field;
    let lead = first.terms[0].1.clone();
    match field {
        Field::Q => {
            let mut g = BigInt::zero();
            for p in comps.iter() {
                for (_, c) in &p.terms {
                    g = g.gcd(c);
                }
            }
            if lead.is_negative() {
                g = -g;
            }
            if !g.is_one() {
                for p in comps.iter_mut() {
                    for (_, c) in p.terms.iter_mut() {
                        *c = &*c / &g;
                    }
                }
            }
        }
        Field::Fp(p) => {
            let pb = BigInt::from(p);
            let inv = lead.modpow(&(&pb - 2u32), &pb);
            if !inv.is_one() {
                for poly in comps.iter_mut() {
                    for (_, c) in poly.terms.iter_mut() {
                        *c = (&*c * &inv).mod_floor(&pb);
                    }
                }
            }
        }
    }
}

/// True when some random line certifies that the components have no common factor.
fn line_certifies_coprime(comps: &[HomPoly]) -> bool {
    let nonzero: Vec<&HomPoly> = comps.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return false;
    }
    if nonzero[0].degree() == Some(0) {
        return true;
    }
    if nonzero.len() == 1 {
        return false;
    }
    let field = nonzero[0].field;
    let modulus = match field {
        Field::Q => LINE_PRIME,
        Field::Fp(p) => p,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x11e5_c0de);
    let nvars = nonzero[0].nvars;
    for _ in 0..4 {
        let a: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..modulus)).collect();
        let b: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..modulus)).collect();
        let images: Vec<Vec<u64>> = nonzero.iter().map(|p| line::restrict_to_line(p, &a, &b, modulus)).collect();
        let full = nonzero
            .iter()
            .zip(&images)
            .any(|(p, img)| line::degree_of(img) == p.degree().map(|d| d as usize));
        if !full {
            continue;
        }
        if line::gcd_is_constant(&images, modulus) {
            return true;
        }
    }
    false
}

/// A content-free tuple of components defining a rational self-map of projective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjComponents {
    comps: Vec<HomPoly>,
}

impl ProjComponents {
    pub fn new(comps: Vec<HomPoly>) -> Result<Self, PolyError> {
        let nvars = comps.first().map(|p| p.nvars).ok_or(PolyError::Degenerate)?;
        if comps.len() != nvars {
            return Err(PolyError::VarMismatch(nvars, comps.len()));
        }
        Ok(ProjComponents { comps: content_free(&comps)? })
    }

    pub fn identity(nvars: usize, field: Field) -> Self {
        ProjComponents { comps: (0..nvars).map(|k| HomPoly::var(nvars, field, k)).collect() }
    }

    /// Parses component texts with rational coefficients. Over Q the tuple is
    /// scaled by the common denominator.
    pub fn parse(texts: &[String], vars: &[String], field: Field) -> Result<Self, PolyError> {
        if texts.len() != vars.len() {
            return Err(PolyError::VarMismatch(vars.len(), texts.len()));
        }
        let raw: Vec<Vec<(Exponents, Rational)>> =
            texts.iter().map(|t| parse_terms(t, vars)).collect::<Result<_, _>>()?;
        let scale = match field {
            Field::Q => raw
                .iter()
                .flatten()
                .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom())),
            Field::Fp(_) => BigInt::one(),
        };
        let scale = Rational::from_integer(scale);
        let mut comps = Vec::with_capacity(raw.len());
        for terms in raw {
            let mut conv = Vec::with_capacity(terms.len());
            for (e, q) in terms {
                let c = field
                    .from_rational(&(q * &scale))
                    .ok_or_else(|| PolyError::Parse(format!("a denominator is divisible by {}", field.characteristic())))?;
                conv.push((e, c));
            }
            comps.push(HomPoly::from_terms(vars.len(), field, conv)?);
        }
        ProjComponents::new(comps)
    }

    pub fn components(&self) -> &[HomPoly] {
        &self.comps
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn field(&self) -> Field {
        self.comps[0].field
    }

    /// Common degree of the components.
    pub fn degree(&self) -> u32 {
        self.comps.iter().find_map(|p| p.degree()).unwrap_or(0)
    }

    pub fn total_terms(&self) -> usize {
        self.comps.iter().map(|p| p.len()).sum()
    }

    /// `self ∘ other`, content removed.
    pub fn compose(&self, other: &ProjComponents, budget: &Budget) -> Result<ProjComponents, PolyError> {
        let raw = compose_raw(&self.comps, &other.comps, budget)?;
        Ok(ProjComponents { comps: content_free_budgeted(&raw, budget)? })
    }

    pub fn to_texts(&self, vars: &[String]) -> Vec<String> {
        self.comps.iter().map(|p| p.to_text(vars)).collect()
    }
}

/// `f ∘ g` with the default budget.
pub fn compose(f: &ProjComponents, g: &ProjComponents) -> Result<ProjComponents, PolyError> {
    f.compose(g, &Budget::default())
}

pub fn multiply(a: &HomPoly, b: &HomPoly) -> Result<HomPoly, PolyError> {
    a.multiply(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceStatus {
    Complete,
    Partial(String),
}

/// First degrees of iterates. Entries past `exact_through` were certified on a
/// random line rather than by exact composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<BigInt>,
    pub exact_through: usize,
    pub status: SequenceStatus,
}

/// `deg_1(f^k)` for `k = 0..=n_max`, exact composition while the budget allows,
/// then line-certified modular images.
pub fn degree_sequence(f: &ProjComponents, n_max: usize, budget: &Budget) -> DegreeSequence {
    let mut degrees = vec![BigInt::one()];
    let mut current = ProjComponents::identity(f.nvars(), f.field());
    let mut exact_through = 0;
    while degrees.len() <= n_max {
        match f.compose(&current, budget) {
            Ok(next) => {
                degrees.push(BigInt::from(next.degree()));
                current = next;
                exact_through += 1;
            }
            Err(PolyError::Budget(_)) => break,
            Err(e) => {
                return DegreeSequence { degrees, exact_through, status: SequenceStatus::Partial(e.to_string()) }
            }
        }
    }
    if degrees.len() > n_max {
        return DegreeSequence { degrees, exact_through, status: SequenceStatus::Complete };
    }
    let mut it = LineIterator::new(f, &current, 0x5eed);
    while degrees.len() <= n_max {
        if let Err(e) = it.step() {
            return DegreeSequence { degrees, exact_through, status: SequenceStatus::Partial(e.to_string()) };
        }
        match it.certified_degree() {
            Some(d) => degrees.push(d),
            None => {
                return DegreeSequence {
                    degrees,
                    exact_through,
                    status: SequenceStatus::Partial("line certificate failed; exact composition over budget".into()),
                }
            }
        }
    }
    DegreeSequence { degrees, exact_through, status: SequenceStatus::Complete }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    fn hp(text: &str, field: Field) -> HomPoly {
        HomPoly::parse(text, &vars(), field).unwrap()
    }

    fn map(texts: &[&str], field: Field) -> ProjComponents {
        let t: Vec<String> = texts.iter().map(|s| s.to_string()).collect();
        ProjComponents::parse(&t, &vars(), field).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let q = Field::Q;
        assert_eq!(hp("x", q).multiply(&hp("y", q)).unwrap(), hp("x*y", q));
        assert_eq!(hp("x+y", q).multiply(&hp("x-y", q)).unwrap(), hp("x^2-y^2", q));
        let f2 = Field::Fp(2);
        assert_eq!(hp("x", f2).multiply(&hp("x", f2)).unwrap(), hp("x^2", f2));
        assert_eq!(hp("x+y", f2).pow(2).unwrap(), hp("x^2+y^2", f2));
        assert!(matches!(hp("x", q).multiply(&hp("x", f2)), Err(PolyError::FieldMismatch(..))));
    }

    #[test]
    fn grlex_storage_order() {
        let p = hp("z^2 + x*y + y^2 + x^2", Field::Q);
        let exps: Vec<&Exponents> = p.terms().iter().map(|(e, _)| e).collect();
        assert_eq!(exps, vec![&vec![2, 0, 0], &vec![1, 1, 0], &vec![0, 2, 0], &vec![0, 0, 2]]);
        assert_eq!(p.to_text(&vars()), "x^2 + x*y + y^2 + z^2");
    }

    #[test]
    fn inhomogeneous_rejected() {
        assert_eq!(HomPoly::parse("x^2 + y", &vars(), Field::Q), Err(PolyError::NotHomogeneous));
    }

    #[test]
    fn content_free_examples() {
        let q = Field::Q;
        let out = content_free(&[hp("x^2*y*z", q), hp("x*y^2*z", q), hp("x*y*z^2", q)]).unwrap();
        assert_eq!(out, vec![hp("x", q), hp("y", q), hp("z", q)]);
        let out = content_free(&[hp("2*x", q), hp("4*y", q), HomPoly::zero(3, q)]).unwrap();
        assert_eq!(out, vec![hp("x", q), hp("2*y", q), HomPoly::zero(3, q)]);
        // non-monomial common factor x + y
        let out = content_free(&[hp("x^2+x*y", q), hp("x*y+y^2", q), hp("x*z+y*z", q)]).unwrap();
        assert_eq!(out, vec![hp("x", q), hp("y", q), hp("z", q)]);
        assert_eq!(content_free(&[HomPoly::zero(3, q)]), Err(PolyError::Degenerate));
    }

    #[test]
    fn cremona_involution_squares_to_identity() {
        let s = map(&["y*z", "x*z", "x*y"], Field::Q);
        let s2 = compose(&s, &s).unwrap();
        assert_eq!(s2, ProjComponents::identity(3, Field::Q));
        let seq = degree_sequence(&s, 6, &Budget::default());
        let expect: Vec<BigInt> = [1, 2, 1, 2, 1, 2, 1].iter().map(|&k| BigInt::from(k)).collect();
        assert_eq!(seq.degrees, expect);
        assert_eq!(seq.status, SequenceStatus::Complete);
    }

    #[test]
    fn identity_is_neutral() {
        let f = map(&["x*z", "y*z+2*x*y", "z^2"], Field::Q);
        let id = ProjComponents::identity(3, Field::Q);
        assert_eq!(compose(&f, &id).unwrap(), f);
        assert_eq!(compose(&id, &f).unwrap(), f);
    }

    #[test]
    fn characteristic_two_collapses_example_map() {
        let f = map(&["x*z", "y*z+2*x*y", "z^2"], Field::Fp(2));
        assert_eq!(f, ProjComponents::identity(3, Field::Fp(2)));
        assert_eq!(f.degree(), 1);
        let f3 = map(&["x*z", "y*z+2*x*y", "z^2"], Field::Fp(3));
        assert_eq!(f3.degree(), 2);
    }

    #[test]
    fn henon_degrees_double() {
        let f = map(&["y*z", "y^2 - x*z + z^2", "z^2"], Field::Q);
        let seq = degree_sequence(&f, 6, &Budget::default());
        let expect: Vec<BigInt> = (0..=6).map(|k| BigInt::from(1u64 << k)).collect();
        assert_eq!(seq.degrees, expect);
        assert_eq!(seq.exact_through, 6);
    }

    #[test]
    fn henon_line_mode_past_budget() {
        let f = map(&["y*z", "y^2 - x*z + z^2", "z^2"], Field::Q);
        let tight = Budget { max_terms: 300, ..Budget::default() };
        let seq = degree_sequence(&f, 12, &tight);
        assert!(seq.exact_through < 12);
        assert_eq!(seq.status, SequenceStatus::Complete);
        let expect: Vec<BigInt> = (0..=12).map(|k| BigInt::from(1u64 << k)).collect();
        assert_eq!(seq.degrees, expect);
    }

    #[test]
    fn rational_coefficients_cleared() {
        let f = map(&["1/2*x", "1/3*y", "z"], Field::Q);
        assert_eq!(f.components()[0], hp("3*x", Field::Q));
        assert_eq!(f.components()[1], hp("2*y", Field::Q));
        assert_eq!(f.components()[2], hp("6*z", Field::Q));
        let t: Vec<String> = ["1/3*x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert!(ProjComponents::parse(&t, &vars(), Field::Fp(3)).is_err());
    }

    #[test]
    fn associativity_and_submultiplicativity_on_small_maps() {
        let f = map(&["x*y", "x*y - 2*z^2", "y*z + 3*z^2"], Field::Q);
        let b = Budget::default();
        let f2 = f.compose(&f, &b).unwrap();
        let left = f2.compose(&f, &b).unwrap();
        let right = f.compose(&f2, &b).unwrap();
        assert_eq!(left, right);
        let seq = degree_sequence(&f, 5, &b);
        for m in 0..seq.degrees.len() {
            for n in 0..seq.degrees.len() - m {
                assert!(seq.degrees[m + n] <= &seq.degrees[m] * &seq.degrees[n]);
            }
        }
    }

    #[test]
    fn reduction_commutes_with_composition() {
        let texts = ["x*y + 2*z^2", "x^2 - 3*y*z", "y^2 + x*z"];
        let q = map(&texts, Field::Q);
        let qq = compose(&q, &q).unwrap();
        for p in [5u64, 7, 11] {
            let fp = map(&texts, Field::Fp(p));
            let composed = compose(&fp, &fp).unwrap();
            let reduced: Vec<HomPoly> = qq
                .components()
                .iter()
                .map(|c| {
                    HomPoly::from_terms(3, Field::Fp(p), c.terms().to_vec()).unwrap()
                })
                .collect();
            assert_eq!(ProjComponents::new(reduced).unwrap(), composed);
        }
    }
}
