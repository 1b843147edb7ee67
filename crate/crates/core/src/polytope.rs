//! Exact convex polytopes in low dimension: hulls, volumes, Minkowski sums and
//! normalized mixed volumes.
//!
//! All predicates are evaluated exactly in the scalar ring `S`. Hulls in
//! dimension two use a monotone chain; higher dimensions enumerate supporting
//! hyperplanes through affinely independent point tuples, which handles
//! coplanar lattice points without special cases. Volumes come from a pulling
//! triangulation.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::scalar::ExactScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} polytopes, got {found}")]
    Count { expected: usize, found: usize },
}

/// Convex hull of finitely many points, stored as its sorted extreme points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polytope<S> {
    ambient_dim: usize,
    vertices: Vec<Vec<S>>,
}

impl<S: ExactScalar> Polytope<S> {
    pub fn convex_hull(points: &[Vec<S>]) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::Empty)?;
        let dim = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(PolytopeError::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let keep = extreme_indices(&pts);
        let mut vertices: Vec<Vec<S>> = keep.into_iter().map(|i| pts[i].clone()).collect();
        vertices.sort();
        Ok(Polytope { ambient_dim: dim, vertices })
    }

    /// Standard simplex `conv(0, e_1, ..., e_d)`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut pts = vec![vec![S::zero(); dim]];
        for k in 0..dim {
            let mut e = vec![S::zero(); dim];
            e[k] = S::one();
            pts.push(e);
        }
        Polytope::convex_hull(&pts).expect("nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<S>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        affine_frame(&self.vertices).1.len()
    }

    /// `d! * vol`, which stays in the scalar ring.
    pub fn normalized_volume(&self) -> S {
        let d = self.ambient_dim;
        if d == 0 || self.affine_dim() < d {
            return S::zero();
        }
        match d {
            1 => self.vertices[self.vertices.len() - 1][0].clone() - self.vertices[0][0].clone(),
            2 => {
                let order = monotone_chain(&self.vertices, 0, 1);
                let mut twice = S::zero();
                for w in 0..order.len() {
                    let p = &self.vertices[order[w]];
                    let q = &self.vertices[order[(w + 1) % order.len()]];
                    twice = twice + (p[0].clone() * q[1].clone() - p[1].clone() * q[0].clone());
                }
                twice.abs()
            }
            _ => {
                let idx: Vec<usize> = (0..self.vertices.len()).collect();
                let mut total = S::zero();
                for simplex in triangulate(&self.vertices, &idx) {
                    let base = &self.vertices[simplex[0]];
                    let rows: Vec<Vec<S>> = simplex[1..]
                        .iter()
                        .map(|&i| sub(&self.vertices[i], base))
                        .collect();
                    total = total + det(rows).abs();
                }
                total
            }
        }
    }

    /// Euclidean volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        self.normalized_volume().to_rational() / Rational::from_integer(factorial(self.ambient_dim))
    }

    pub fn minkowski_sum(&self, other: &Polytope<S>) -> Result<Polytope<S>, PolytopeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                pts.push(p.iter().zip(q).map(|(a, b)| a.clone() + b.clone()).collect());
            }
        }
        Polytope::convex_hull(&pts)
    }

    pub fn dilate(&self, k: &S) -> Polytope<S> {
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c.clone() * k.clone()).collect())
            .collect();
        Polytope::convex_hull(&pts).expect("nonempty")
    }

    pub fn translate(&self, shift: &[S]) -> Polytope<S> {
        let pts: Vec<Vec<S>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(shift).map(|(a, b)| a.clone() + b.clone()).collect())
            .collect();
        Polytope::convex_hull(&pts).expect("nonempty")
    }
}

/// `d! * V(P_1, ..., P_d)` by inclusion-exclusion over Minkowski sums of subsets,
/// normalized so that `MV(Σ, ..., Σ) = 1` for the standard simplex.
pub fn mixed_volume_normalized<S: ExactScalar>(ps: &[Polytope<S>]) -> Result<Rational, PolytopeError> {
    let d = ps.first().map(|p| p.ambient_dim).ok_or(PolytopeError::Count { expected: 1, found: 0 })?;
    if ps.len() != d {
        return Err(PolytopeError::Count { expected: d, found: ps.len() });
    }
    let mut groups: Vec<(Polytope<S>, usize)> = Vec::new();
    for p in ps {
        match groups.iter_mut().find(|(q, _)| q == p) {
            Some(slot) => slot.1 += 1,
            None => groups.push((p.clone(), 1)),
        }
    }
    mixed_volume_grouped(&groups)
}

/// Mixed volume with polytope `P_k` repeated `r_k` times. Subsets of equal
/// arguments collapse to dilations, so only `∏(r_k + 1) - 1` hulls are built.
pub fn mixed_volume_grouped<S: ExactScalar>(groups: &[(Polytope<S>, usize)]) -> Result<Rational, PolytopeError> {
    let d = groups.first().map(|g| g.0.ambient_dim).ok_or(PolytopeError::Count { expected: 1, found: 0 })?;
    let total_count: usize = groups.iter().map(|g| g.1).sum();
    if total_count != d {
        return Err(PolytopeError::Count { expected: d, found: total_count });
    }
    if let Some(bad) = groups.iter().find(|g| g.0.ambient_dim != d) {
        return Err(PolytopeError::DimensionMismatch { expected: d, found: bad.0.ambient_dim });
    }
    let mut counts = vec![0usize; groups.len()];
    let mut total = BigInt::zero();
    loop {
        // odometer over 0..=r_k
        let mut pos = 0;
        loop {
            if pos == counts.len() {
                return Ok(Rational::from_integer(total) / Rational::from_integer(factorial(d)));
            }
            if counts[pos] < groups[pos].1 {
                counts[pos] += 1;
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
        let mut sum: Option<Polytope<S>> = None;
        let mut weight = BigInt::one();
        let mut size = 0;
        for ((p, r), &c) in groups.iter().zip(&counts) {
            if c == 0 {
                continue;
            }
            size += c;
            weight *= crate::exactnum::binomial(*r as u64, c as i64);
            let scaled = if c == 1 { p.clone() } else { p.dilate(&S::from_usize(c)) };
            sum = Some(match sum {
                None => scaled,
                Some(acc) => acc.minkowski_sum(&scaled)?,
            });
        }
        let vol = sum.expect("nonempty subset").normalized_volume().to_rational();
        debug_assert!(vol.is_integer());
        let term = vol.to_integer() * weight;
        if (d - size) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn sub<S: ExactScalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn dot<S: ExactScalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Determinant by fraction-free (Bareiss) elimination; exact in any integral domain.
pub(crate) fn det<S: ExactScalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    match n {
        0 => return S::one(),
        1 => return m[0][0].clone(),
        2 => return m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {}
    }
    let mut sign = S::one();
    let mut prev = S::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Base point index and pivot coordinates of the affine hull. Projection onto the
/// pivot coordinates is injective on the affine hull.
fn affine_frame<S: ExactScalar>(points: &[Vec<S>]) -> (usize, Vec<usize>) {
    if points.len() < 2 {
        return (0, Vec::new());
    }
    let dim = points[0].len();
    let mut rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| sub(p, &points[0]).iter().map(|c| c.to_rational()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0, pivots)
}

fn project<S: ExactScalar>(points: &[Vec<S>], coords: &[usize]) -> Vec<Vec<S>> {
    points.iter().map(|p| coords.iter().map(|&c| p[c].clone()).collect()).collect()
}

/// Indices of extreme points among distinct `points`.
fn extreme_indices<S: ExactScalar>(points: &[Vec<S>]) -> Vec<usize> {
    if points.len() <= 1 {
        return (0..points.len()).collect();
    }
    let (_, coords) = affine_frame(points);
    let k = coords.len();
    let proj = project(points, &coords);
    match k {
        0 => vec![0],
        1 => {
            let lo = (0..proj.len()).min_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
            let hi = (0..proj.len()).max_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
            vec![lo, hi]
        }
        2 => monotone_chain(&proj, 0, 1),
        _ => {
            let mut out = HashSet::new();
            for facet in facets(&proj) {
                let sub_pts: Vec<Vec<S>> = facet.iter().map(|&i| proj[i].clone()).collect();
                for j in extreme_indices(&sub_pts) {
                    out.insert(facet[j]);
                }
            }
            let mut v: Vec<usize> = out.into_iter().collect();
            v.sort();
            v
        }
    }
}

/// Counter-clockwise hull in coordinates `(x, y)`, collinear points dropped.
fn monotone_chain<S: ExactScalar>(points: &[Vec<S>], x: usize, y: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| (&points[a][x], &points[a][y]).cmp(&(&points[b][x], &points[b][y])));
    order.dedup_by(|a, b| points[*a][x] == points[*b][x] && points[*a][y] == points[*b][y]);
    if order.len() <= 2 {
        return order;
    }
    let cross = |o: usize, a: usize, b: usize| -> S {
        (points[a][x].clone() - points[o][x].clone()) * (points[b][y].clone() - points[o][y].clone())
            - (points[a][y].clone() - points[o][y].clone()) * (points[b][x].clone() - points[o][x].clone())
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &p in &order {
        while hull.len() >= 2 && !cross(hull[hull.len() - 2], hull[hull.len() - 1], p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && !cross(hull[hull.len() - 2], hull[hull.len() - 1], p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Facets of a full-dimensional point set in `R^k` (k >= 2), each given as the
/// sorted indices of all points lying on it.
fn facets<S: ExactScalar>(points: &[Vec<S>]) -> Vec<Vec<usize>> {
    let k = points[0].len();
    let n = points.len();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        if !found.iter().any(|f| combo.iter().all(|c| f.binary_search(c).is_ok())) {
            if let Some(facet) = supporting_facet(points, &combo) {
                if seen.insert(facet.clone()) {
                    found.push(facet);
                }
            }
        }
        // next combination in lexicographic order
        let mut pos = k;
        loop {
            if pos == 0 {
                return found;
            }
            pos -= 1;
            if combo[pos] < n - k + pos {
                break;
            }
        }
        combo[pos] += 1;
        for j in pos + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn supporting_facet<S: ExactScalar>(points: &[Vec<S>], combo: &[usize]) -> Option<Vec<usize>> {
    let k = points[0].len();
    let base = &points[combo[0]];
    let rows: Vec<Vec<S>> = combo[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let mut normal = Vec::with_capacity(k);
    for c in 0..k {
        let minor: Vec<Vec<S>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let v = det(minor);
        normal.push(if c % 2 == 0 { v } else { -v });
    }
    if normal.iter().all(|c| c.is_zero()) {
        return None;
    }
    let offset = dot(&normal, base);
    let (mut pos, mut neg) = (false, false);
    let mut on = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let v = dot(&normal, p) - offset.clone();
        if v.is_positive() {
            pos = true;
        } else if v.is_negative() {
            neg = true;
        } else {
            on.push(i);
        }
        if pos && neg {
            return None;
        }
    }
    Some(on)
}

/// Pulling triangulation of `conv(points[idx])` into simplices of its own dimension.
fn triangulate<S: ExactScalar>(points: &[Vec<S>], idx: &[usize]) -> Vec<Vec<usize>> {
    let subset: Vec<Vec<S>> = idx.iter().map(|&i| points[i].clone()).collect();
    let (_, coords) = affine_frame(&subset);
    let k = coords.len();
    if k == 0 {
        return vec![vec![idx[0]]];
    }
    let proj = project(&subset, &coords);
    let local_facets: Vec<Vec<usize>> = if k == 1 {
        let lo = (0..proj.len()).min_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
        let hi = (0..proj.len()).max_by(|&a, &b| proj[a][0].cmp(&proj[b][0])).unwrap();
        vec![vec![lo], vec![hi]]
    } else {
        facets(&proj)
    };
    let apex = 0usize;
    let mut out = Vec::new();
    for facet in local_facets {
        if facet.contains(&apex) {
            continue;
        }
        let global: Vec<usize> = facet.iter().map(|&j| idx[j]).collect();
        for mut simplex in triangulate(points, &global) {
            simplex.insert(0, idx[apex]);
            out.push(simplex);
        }
    }
    out
}
