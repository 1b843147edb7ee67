//! The polytope backend against exact composition of the homogenized monomial
//! map, and both against max row sums of matrix powers.

use dyndeg_core::oracle::{homogenize_monomial, MapSpec, MixedDegreeOracle, MonomialOracle, ProjectiveOracle};
use dyndeg_core::polyring::Budget;
use num_bigint::BigInt;

const N_MAX: u64 = 8;

fn matrices() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![2, 1], vec![1, 1]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![1, 2], vec![1, 0]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
        vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]],
        vec![vec![2, 0, 1], vec![0, 1, 0], vec![1, 0, 1]],
    ]
}

fn big(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn max_row_sum_of_power(a: &[Vec<i64>], n: u64) -> BigInt {
    let d = a.len();
    let a = big(a);
    let mut p: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    for _ in 0..n {
        p = (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| &p[i][k] * &a[k][j]).sum()).collect()).collect();
    }
    p.iter().map(|r| r.iter().sum::<BigInt>()).max().unwrap()
}

#[test]
fn polytope_equals_composition() {
    for a in matrices() {
        let poly = MonomialOracle::new(&MapSpec::monomial(big(&a)).unwrap()).unwrap();
        let comp = ProjectiveOracle::new(&homogenize_monomial(&big(&a)).unwrap(), Budget::unlimited()).unwrap();
        for n in 0..=N_MAX {
            let p = poly.degree(1, n).unwrap();
            let c = comp.degree(1, n).unwrap();
            assert_eq!(p, c, "A = {a:?}, n = {n}");
            assert_eq!(p, max_row_sum_of_power(&a, n), "A = {a:?}, n = {n}");
        }
        assert_eq!(comp.exact_iterates() as u64, N_MAX, "A = {a:?} left exact composition");
    }
}

#[test]
fn top_degrees_agree() {
    for a in matrices() {
        let poly = MonomialOracle::new(&MapSpec::monomial(big(&a)).unwrap()).unwrap();
        let comp = ProjectiveOracle::new(&homogenize_monomial(&big(&a)).unwrap(), Budget::unlimited()).unwrap();
        let d = a.len();
        for n in 1..=4 {
            assert_eq!(poly.degree(d, n).unwrap(), comp.degree(d, n).unwrap(), "A = {a:?}, n = {n}");
        }
    }
}
