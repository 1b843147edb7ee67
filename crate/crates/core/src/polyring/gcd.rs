//! Exact multivariate gcd by recursive primitive remainder sequences.
//!
//! Homogeneous tuples are dehomogenized at the last variable (valid once the
//! monomial content is gone), processed as ordinary polynomials over Z or F_p,
//! and homogenized back.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Field, HomPoly};

/// Sparse polynomial keyed by exponent vectors in lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct MPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

struct Ring {
    field: Field,
    nvars: usize,
}

impl Ring {
    fn reduce(&self, c: BigInt) -> BigInt {
        self.field.reduce(c)
    }

    fn zero(&self) -> MPoly {
        MPoly { terms: BTreeMap::new() }
    }

    fn constant(&self, c: BigInt) -> MPoly {
        let mut terms = BTreeMap::new();
        let c = self.reduce(c);
        if !c.is_zero() {
            terms.insert(vec![0; self.nvars], c);
        }
        MPoly { terms }
    }

    fn add_into(&self, acc: &mut MPoly, e: Vec<u32>, c: BigInt) {
        let entry = acc.terms.entry(e).or_insert_with(BigInt::zero);
        *entry = self.reduce(&*entry + c);
        if entry.is_zero() {
            acc.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry = self.reduce(&*entry - c);
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(e, c)| (e, self.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MPoly { terms }
    }

    fn mul_term(&self, a: &MPoly, e: &[u32], c: &BigInt) -> MPoly {
        let terms = a
            .terms
            .iter()
            .map(|(ea, ca)| (ea.iter().zip(e).map(|(x, y)| x + y).collect(), self.reduce(ca * c)))
            .filter(|(_, c): &(Vec<u32>, BigInt)| !c.is_zero())
            .collect();
        MPoly { terms }
    }

    fn divides_coeff(&self, num: &BigInt, den: &BigInt) -> Option<BigInt> {
        match self.field {
            Field::Q => {
                let (q, r) = num.div_rem(den);
                r.is_zero().then_some(q)
            }
            Field::Fp(p) => {
                let pb = BigInt::from(p);
                let inv = den.modpow(&(&pb - 2u32), &pb);
                Some((num * inv).mod_floor(&pb))
            }
        }
    }

    /// Exact quotient `a / b`, or `None` if `b` does not divide `a`.
    fn exact_div(&self, a: &MPoly, b: &MPoly) -> Option<MPoly> {
        let (eb, cb) = b.terms.iter().next_back()?;
        let mut r = a.clone();
        let mut q = self.zero();
        while let Some((er, cr)) = r.terms.iter().next_back() {
            if er.iter().zip(eb).any(|(x, y)| x < y) {
                return None;
            }
            let e: Vec<u32> = er.iter().zip(eb).map(|(x, y)| x - y).collect();
            let c = self.divides_coeff(cr, cb)?;
            r = self.sub(&r, &self.mul_term(b, &e, &c));
            self.add_into(&mut q, e, c);
        }
        Some(q)
    }

    fn degree_in(&self, a: &MPoly, k: usize) -> Option<u32> {
        a.terms.keys().map(|e| e[k]).max()
    }

    /// Coefficient of `x_k^deg`, with `x_k` removed.
    fn coeff_in(&self, a: &MPoly, k: usize, deg: u32) -> MPoly {
        let terms = a
            .terms
            .iter()
            .filter(|(e, _)| e[k] == deg)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[k] = 0;
                (e2, c.clone())
            })
            .collect();
        MPoly { terms }
    }

    fn coeffs_in(&self, a: &MPoly, k: usize) -> Vec<MPoly> {
        let mut grouped: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &a.terms {
            let mut e2 = e.clone();
            let d = e2[k];
            e2[k] = 0;
            grouped.entry(d).or_insert_with(|| self.zero()).terms.insert(e2, c.clone());
        }
        grouped.into_values().collect()
    }

    /// Scale so the lex-leading coefficient is positive (Z) or one (F_p).
    fn normalize(&self, a: MPoly) -> MPoly {
        let Some((_, lead)) = a.terms.iter().next_back() else {
            return a;
        };
        match self.field {
            Field::Q => {
                if lead.is_negative() {
                    self.mul_term(&a, &vec![0; self.nvars], &BigInt::from(-1))
                } else {
                    a
                }
            }
            Field::Fp(p) => {
                let pb = BigInt::from(p);
                let inv = lead.modpow(&(&pb - 2u32), &pb);
                self.mul_term(&a, &vec![0; self.nvars], &inv)
            }
        }
    }

    fn content(&self, a: &MPoly, k: usize) -> MPoly {
        let mut g = self.zero();
        for c in self.coeffs_in(a, k) {
            g = self.gcd(&g, &c, k + 1);
            if self.is_unit(&g) {
                break;
            }
        }
        g
    }

    fn is_unit(&self, a: &MPoly) -> bool {
        a.terms.len() == 1
            && a.terms.keys().next().unwrap().iter().all(|&x| x == 0)
            && match self.field {
                Field::Q => a.terms.values().next().unwrap().abs().is_one(),
                Field::Fp(_) => true,
            }
    }

    fn primitive_part(&self, a: &MPoly, k: usize) -> MPoly {
        if a.terms.is_empty() {
            return a.clone();
        }
        let c = self.content(a, k);
        self.exact_div(a, &c).expect("content divides")
    }

    /// Pseudo-remainder of `a` by `b` in the variable `x_k`.
    fn prem(&self, a: &MPoly, b: &MPoly, k: usize) -> MPoly {
        let db = self.degree_in(b, k).unwrap();
        let lc = self.coeff_in(b, k, db);
        let mut r = a.clone();
        while let Some(dr) = self.degree_in(&r, k) {
            if dr < db || r.terms.is_empty() {
                break;
            }
            let lr = self.coeff_in(&r, k, dr);
            let mut shift = vec![0u32; self.nvars];
            shift[k] = dr - db;
            let lifted = self.mul(&self.mul_term(&lr, &shift, &BigInt::one()), b);
            r = self.sub(&self.mul(&lc, &r), &lifted);
        }
        r
    }

    /// Gcd of polynomials in the variables `x_k, ..., x_{n-1}`.
    fn gcd(&self, a: &MPoly, b: &MPoly, k: usize) -> MPoly {
        if a.terms.is_empty() {
            return self.normalize(b.clone());
        }
        if b.terms.is_empty() {
            return self.normalize(a.clone());
        }
        if k == self.nvars {
            return match self.field {
                Field::Q => {
                    let x = a.terms.values().next().unwrap();
                    let y = b.terms.values().next().unwrap();
                    self.constant(x.gcd(y))
                }
                Field::Fp(_) => self.constant(BigInt::one()),
            };
        }
        let (ca, cb) = (self.content(a, k), self.content(b, k));
        let c = self.gcd(&ca, &cb, k + 1);
        let mut p = self.exact_div(a, &ca).expect("content divides");
        let mut q = self.exact_div(b, &cb).expect("content divides");
        if self.degree_in(&p, k) < self.degree_in(&q, k) {
            std::mem::swap(&mut p, &mut q);
        }
        let g = loop {
            if q.terms.is_empty() {
                break self.primitive_part(&p, k);
            }
            if self.degree_in(&q, k) == Some(0) {
                break self.constant(BigInt::one());
            }
            let r = self.prem(&p, &q, k);
            p = q;
            q = self.primitive_part(&r, k);
        };
        let g = if self.degree_in(&g, k) == Some(0) { self.constant(BigInt::one()) } else { g };
        self.normalize(self.mul(&c, &g))
    }
}

fn dehomogenize(p: &HomPoly) -> MPoly {
    let last = p.nvars() - 1;
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2[last] = 0;
            (e2, c.clone())
        })
        .collect();
    MPoly { terms }
}

fn homogenize(a: &MPoly, degree: u32, nvars: usize, field: Field) -> HomPoly {
    let last = nvars - 1;
    let terms = a
        .terms
        .iter()
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2[last] = degree - e.iter().sum::<u32>();
            (e2, c.clone())
        })
        .collect();
    HomPoly::from_terms(nvars, field, terms).expect("homogenized")
}

/// Gcd of all components of a tuple free of monomial content.
pub(super) fn tuple_gcd(comps: &[HomPoly]) -> HomPoly {
    let first = comps.iter().find(|p| !p.is_zero()).expect("nonzero tuple");
    let ring = Ring { field: first.field(), nvars: first.nvars() };
    let mut g = ring.zero();
    for p in comps.iter().filter(|p| !p.is_zero()) {
        g = ring.gcd(&g, &dehomogenize(p), 0);
        if ring.is_unit(&g) {
            break;
        }
    }
    let degree = g.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0);
    homogenize(&g, degree, first.nvars(), first.field())
}

/// `p / g` for a homogeneous divisor `g` known to divide `p`.
pub(super) fn exact_quotient(p: &HomPoly, g: &HomPoly) -> HomPoly {
    if p.is_zero() {
        return p.clone();
    }
    let ring = Ring { field: p.field(), nvars: p.nvars() };
    let q = ring.exact_div(&dehomogenize(p), &dehomogenize(g)).expect("gcd divides every component");
    homogenize(&q, p.degree().unwrap() - g.degree().unwrap(), p.nvars(), p.field())
}
