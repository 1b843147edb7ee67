use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mulmod, powmod, Field, HomPoly, PolyError, ProjComponents, LINE_PRIME};

fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        det = mulmod(det, m[col][col], p);
        let inv = powmod(m[col][col], p - 2, p);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = mulmod(m[r][col], inv, p);
            for c in col..n {
                let sub = mulmod(f, m[col][c], p);
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
    }
    det
}

/// Determinant of the Jacobian matrix `(∂F_i/∂x_j)` by Laplace expansion.
pub fn jacobian_determinant(f: &ProjComponents) -> Result<HomPoly, PolyError> {
    let n = f.nvars();
    let jac: Vec<Vec<HomPoly>> = f
        .components()
        .iter()
        .map(|p| (0..n).map(|k| p.derivative(k)).collect())
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    laplace(&jac, 0, &cols, f.field(), n)
}

fn laplace(jac: &[Vec<HomPoly>], row: usize, cols: &[usize], field: Field, nvars: usize) -> Result<HomPoly, PolyError> {
    if cols.is_empty() {
        return Ok(HomPoly::constant(nvars, field, BigInt::from(1)));
    }
    let mut total = HomPoly::zero(nvars, field);
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &jac[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(jac, row + 1, &rest, field, nvars)?;
        let mut term = entry.multiply(&minor)?;
        if idx % 2 == 1 {
            term = term.neg();
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Dominance test: the Jacobian determinant is evaluated at random points and,
/// if it vanishes at all of them, expanded symbolically. A nonzero Jacobian
/// proves dominance; an identically zero one is treated as non-dominant (which
/// in positive characteristic also rejects inseparable maps).
pub fn is_dominant(f: &ProjComponents, trials: usize, seed: u64) -> Result<bool, PolyError> {
    let n = f.nvars();
    let p = match f.field() {
        Field::Q => LINE_PRIME,
        Field::Fp(p) => p,
    };
    let jac: Vec<Vec<HomPoly>> = f
        .components()
        .iter()
        .map(|c| (0..n).map(|k| c.derivative(k)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let m: Vec<Vec<u64>> = jac.iter().map(|row| row.iter().map(|e| e.eval_mod(&point, p)).collect()).collect();
        if det_mod(m, p) != 0 {
            return Ok(true);
        }
    }
    Ok(!jacobian_determinant(f)?.is_zero())
}
