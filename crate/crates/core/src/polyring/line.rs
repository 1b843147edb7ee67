//! Univariate images of homogeneous tuples along random lines, modulo a prime.
//!
//! If `G = gcd(F_0, ..., F_d)` has degree `e`, the images `F_i(s*a + b)` share
//! the factor `G(s*a + b)`, which has degree exactly `e` whenever some image has
//! full degree (its leading coefficient is `F_i(a)`, and `G(a)` divides it). So
//! coprime images with one full-degree image certify `e = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{addmod, mulmod, powmod, Field, HomPoly, PolyError, ProjComponents, LINE_PRIME};

/// Dense polynomials of degree beyond this are not run through Euclid.
const EUCLID_LIMIT: usize = 1 << 14;
const KARATSUBA_CUTOFF: usize = 32;

fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn inv(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub(super) fn degree_of(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn schoolbook(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, m), m);
        }
    }
    out
}

fn add_slices(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| addmod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m))
        .collect()
}

fn karatsuba(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        return schoolbook(a, b, m);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(a0, b0, m);
    let z2 = karatsuba(a1, b1, m);
    let z1 = karatsuba(&add_slices(a0, a1, m), &add_slices(b0, b1, m), m);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &c) in z0.iter().enumerate() {
        out[i] = addmod(out[i], c, m);
    }
    for (i, &c) in z1.iter().enumerate() {
        let c = submod(submod(c, *z0.get(i).unwrap_or(&0), m), *z2.get(i).unwrap_or(&0), m);
        out[i + half] = addmod(out[i + half], c, m);
    }
    for (i, &c) in z2.iter().enumerate() {
        out[i + 2 * half] = addmod(out[i + 2 * half], c, m);
    }
    out
}

fn mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    trim(karatsuba(a, b, m))
}

fn eval(p: &[u64], x: u64, m: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, m), c, m))
}

fn rem(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let db = degree_of(b).expect("nonzero divisor");
    let lead_inv = inv(b[db], m);
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let top = r.len() - 1;
        let f = mulmod(r[top], lead_inv, m);
        let shift = top - db;
        for (k, &c) in b[..=db].iter().enumerate() {
            r[shift + k] = submod(r[shift + k], mulmod(f, c, m), m);
        }
        r = trim(r);
    }
    r
}

fn gcd(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, m);
        x = y;
        y = r;
    }
    x
}

/// True when the images have no common factor of positive degree.
pub(super) fn gcd_is_constant(images: &[Vec<u64>], m: u64) -> bool {
    let mut g: Vec<u64> = Vec::new();
    for img in images {
        g = gcd(&g, img, m);
        if degree_of(&g) == Some(0) {
            return true;
        }
    }
    degree_of(&g) == Some(0)
}

fn coeff_mod(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m)).to_u64().expect("reduced")
}

/// `p(s*a + b)` as a dense univariate polynomial modulo `m`.
pub(super) fn restrict_to_line(p: &HomPoly, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let deg = deg as usize;
    if (m as u128) > deg as u128 + 1 {
        interpolate_image(p, a, b, deg, m)
    } else {
        expand_image(p, a, b, m)
    }
}

fn expand_image(p: &HomPoly, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let nvars = p.nvars();
    let maxpow: Vec<u32> = (0..nvars)
        .map(|k| p.terms().iter().map(|(e, _)| e[k]).max().unwrap_or(0))
        .collect();
    let lines: Vec<Vec<u64>> = (0..nvars).map(|k| trim(vec![b[k] % m, a[k] % m])).collect();
    let powers: Vec<Vec<Vec<u64>>> = (0..nvars)
        .map(|k| {
            let mut table = vec![vec![1u64]];
            for _ in 0..maxpow[k] {
                let next = mul(table.last().unwrap(), &lines[k], m);
                table.push(next);
            }
            table
        })
        .collect();
    let mut out: Vec<u64> = Vec::new();
    for (e, c) in p.terms() {
        let mut term = vec![coeff_mod(c, m)];
        for k in 0..nvars {
            term = mul(&term, &powers[k][e[k] as usize], m);
        }
        out = add_slices(&out, &term, m);
    }
    trim(out)
}

/// Values at `s = 0..=deg` followed by Newton interpolation.
fn interpolate_image(p: &HomPoly, a: &[u64], b: &[u64], deg: usize, m: u64) -> Vec<u64> {
    let nvars = p.nvars();
    let maxpow: Vec<usize> = (0..nvars)
        .map(|k| p.terms().iter().map(|(e, _)| e[k] as usize).max().unwrap_or(0))
        .collect();
    let coeffs: Vec<u64> = p.terms().iter().map(|(_, c)| coeff_mod(c, m)).collect();
    let mut values = Vec::with_capacity(deg + 1);
    for s in 0..=deg as u64 {
        let tables: Vec<Vec<u64>> = (0..nvars)
            .map(|k| {
                let x = addmod(mulmod(s, a[k], m), b[k], m);
                let mut t = Vec::with_capacity(maxpow[k] + 1);
                let mut acc = 1u64;
                for _ in 0..=maxpow[k] {
                    t.push(acc);
                    acc = mulmod(acc, x, m);
                }
                t
            })
            .collect();
        let mut v = 0u64;
        for ((e, _), &c) in p.terms().iter().zip(&coeffs) {
            let mut t = c;
            for k in 0..nvars {
                if e[k] > 0 {
                    t = mulmod(t, tables[k][e[k] as usize], m);
                }
            }
            v = addmod(v, t, m);
        }
        values.push(v);
    }
    // divided differences on the nodes 0..=deg
    let inverses: Vec<u64> = (0..=deg as u64).map(|k| if k == 0 { 0 } else { inv(k, m) }).collect();
    let mut dd = values;
    for level in 1..=deg {
        for i in (level..=deg).rev() {
            let diff = submod(dd[i], dd[i - 1], m);
            dd[i] = mulmod(diff, inverses[level], m);
        }
    }
    let mut poly = vec![dd[deg]];
    for k in (0..deg).rev() {
        // poly = poly * (s - k) + dd[k]
        let mut next = vec![0u64; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = addmod(next[i + 1], c, m);
            next[i] = submod(next[i], mulmod(c, k as u64, m), m);
        }
        next[0] = addmod(next[0], dd[k], m);
        poly = next;
    }
    trim(poly)
}

#[derive(Debug, Clone)]
enum Image {
    Dense(Vec<u64>),
    /// `coef * (s - root)^deg`
    PurePower { coef: u64, root: u64, deg: u64 },
}

/// Iterates `f` on the line images of a content-free starting tuple `E`,
/// certifying at each step that the raw composite `f^j ∘ E` is still content-free.
#[derive(Debug, Clone)]
pub struct LineIterator {
    f: ProjComponents,
    modulus: u64,
    images: Vec<Image>,
    raw_degree: BigInt,
    inverses: Vec<u64>,
}

impl LineIterator {
    pub fn new(f: &ProjComponents, start: &ProjComponents, seed: u64) -> LineIterator {
        let modulus = match f.field() {
            Field::Q => LINE_PRIME,
            Field::Fp(p) => p,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nvars = f.nvars();
        let a: Vec<u64> = (0..nvars).map(|_| rng.gen_range(1..modulus)).collect();
        let b: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..modulus)).collect();
        let images = start
            .components()
            .iter()
            .map(|p| match p.terms() {
                [(e, c)] if e.iter().filter(|&&x| x > 0).count() == 1 => {
                    let k = e.iter().position(|&x| x > 0).unwrap();
                    let deg = e[k] as u64;
                    // c * (a_k s + b_k)^deg = c a_k^deg (s + b_k / a_k)^deg
                    let coef = mulmod(coeff_mod(c, modulus), powmod(a[k], deg, modulus), modulus);
                    let root = submod(0, mulmod(b[k], inv(a[k], modulus), modulus), modulus);
                    Image::PurePower { coef, root, deg }
                }
                _ => Image::Dense(restrict_to_line(p, &a, &b, modulus)),
            })
            .collect();
        LineIterator {
            f: f.clone(),
            modulus,
            images,
            raw_degree: BigInt::from(start.degree()),
            inverses: vec![0, 1],
        }
    }

    fn dense(&mut self, img: &Image) -> Result<Vec<u64>, PolyError> {
        match img {
            Image::Dense(v) => Ok(v.clone()),
            Image::PurePower { coef, root, deg } => {
                let m = self.modulus;
                let n = *deg as usize;
                if *coef == 0 {
                    return Ok(Vec::new());
                }
                if (n as u64) >= m {
                    return Err(PolyError::Budget("pure power exponent exceeds the characteristic".into()));
                }
                while self.inverses.len() <= n {
                    let k = self.inverses.len() as u64;
                    self.inverses.push(inv(k, m));
                }
                // coef * sum_k C(n,k) (-root)^(n-k) s^k
                let neg_root = submod(0, *root, m);
                let mut out = vec![0u64; n + 1];
                let mut binom = 1u64;
                let mut rpow = vec![1u64; n + 1];
                for k in 1..=n {
                    rpow[k] = mulmod(rpow[k - 1], neg_root, m);
                }
                for k in 0..=n {
                    out[k] = mulmod(mulmod(coef % m, binom, m), rpow[n - k], m);
                    if k < n {
                        binom = mulmod(mulmod(binom, (n - k) as u64, m), self.inverses[k + 1], m);
                    }
                }
                Ok(trim(out))
            }
        }
    }

    /// Applies `f` once to the current images.
    pub fn step(&mut self) -> Result<(), PolyError> {
        let m = self.modulus;
        let f = self.f.clone();
        let current = std::mem::take(&mut self.images);
        let mut dense_cache: Vec<Option<Vec<u64>>> = vec![None; current.len()];
        let mut power_cache: std::collections::HashMap<(usize, u32), Vec<u64>> = Default::default();
        let mut next = Vec::with_capacity(current.len());
        for comp in f.components() {
            if let [(e, c)] = comp.terms() {
                if e.iter().filter(|&&x| x > 0).count() == 1 {
                    let k = e.iter().position(|&x| x > 0).unwrap();
                    if let Image::PurePower { coef, root, deg } = current[k] {
                        let d = e[k] as u64;
                        next.push(Image::PurePower {
                            coef: mulmod(coeff_mod(c, m), powmod(coef, d, m), m),
                            root,
                            deg: deg * d,
                        });
                        continue;
                    }
                }
            }
            let mut acc: Vec<u64> = Vec::new();
            for (e, c) in comp.terms() {
                let mut term = vec![coeff_mod(c, m)];
                for (k, &x) in e.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if !power_cache.contains_key(&(k, x)) {
                        if dense_cache[k].is_none() {
                            dense_cache[k] = Some(self.dense(&current[k])?);
                        }
                        let base = dense_cache[k].as_ref().unwrap();
                        let mut pw = vec![1u64];
                        let mut sq = base.clone();
                        let mut ex = x;
                        while ex > 0 {
                            if ex & 1 == 1 {
                                pw = mul(&pw, &sq, m);
                            }
                            ex >>= 1;
                            if ex > 0 {
                                sq = mul(&sq, &sq, m);
                            }
                        }
                        power_cache.insert((k, x), pw);
                    }
                    term = mul(&term, &power_cache[&(k, x)], m);
                }
                acc = add_slices(&acc, &term, m);
            }
            next.push(Image::Dense(trim(acc)));
        }
        self.images = next;
        self.raw_degree *= BigInt::from(f.degree());
        Ok(())
    }

    /// Degree of the current iterate if the line certifies the raw composite
    /// is content-free.
    pub fn certified_degree(&self) -> Option<BigInt> {
        let m = self.modulus;
        let target = self.raw_degree.to_u64()?;
        let full = self.images.iter().any(|img| match img {
            Image::Dense(v) => degree_of(v).map(|d| d as u64) == Some(target),
            Image::PurePower { coef, deg, .. } => *coef != 0 && *deg == target,
        });
        if !full {
            return None;
        }
        if target == 0 {
            return Some(self.raw_degree.clone());
        }
        let pure = self.images.iter().find_map(|img| match img {
            Image::PurePower { coef, root, deg } if *coef != 0 && *deg > 0 => Some(*root),
            _ => None,
        });
        let coprime = match pure {
            Some(root) => self.images.iter().any(|img| match img {
                Image::Dense(v) => eval(v, root, m) != 0,
                Image::PurePower { coef, root: r, deg } => *coef != 0 && (*deg == 0 || *r != root),
            }),
            None => {
                let dense: Vec<Vec<u64>> = self
                    .images
                    .iter()
                    .map(|img| match img {
                        Image::Dense(v) => v.clone(),
                        Image::PurePower { .. } => unreachable!(),
                    })
                    .collect();
                if dense.iter().all(|v| v.len() > EUCLID_LIMIT) {
                    return None;
                }
                gcd_is_constant(&dense, m)
            }
        };
        coprime.then(|| self.raw_degree.clone())
    }

    pub fn raw_degree(&self) -> &BigInt {
        &self.raw_degree
    }

    pub fn is_degenerate(&self) -> bool {
        self.images.iter().all(|img| match img {
            Image::Dense(v) => v.is_empty(),
            Image::PurePower { coef, .. } => *coef == 0,
        })
    }
}
