//! Brute-force oracles shared by the integration tests and the acceptance run.
//! None of them calls into the search or solver code they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use cr_preimage::sets::ZSet;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

/// Determinant by Laplace expansion along the first row.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return big(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rank and the gcd of all nonzero maximal minors.
pub fn rank_and_divisor(m: &[Vec<BigInt>]) -> (usize, BigInt) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if !g.is_zero() {
            return (k, g);
        }
    }
    (0, big(1))
}

/// Whether `M x = b` has an integer solution: the ranks of `M` and `[M | b]`
/// agree and so do the gcds of their maximal minors.
pub fn integer_solvable(m: &[Vec<BigInt>], b: &[BigInt]) -> bool {
    let aug: Vec<Vec<BigInt>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let (r1, g1) = rank_and_divisor(m);
    let (r2, g2) = rank_and_divisor(&aug);
    r1 == r2 && g1 == g2
}

/// Integer solvability of `A x = (1, ..., 1)` for a rational `A`.
pub fn constant_image_oracle(a: &[Vec<BigRational>]) -> bool {
    let d = a.iter().flatten().fold(big(1), |acc, x| acc.lcm(x.denom()));
    let m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    let b = vec![d; a.len()];
    integer_solvable(&m, &b)
}

/// First `(a, H)` with `a + Σ_{t∈H} f(t) ∈ set` for every column `f`, in the
/// order `|a|`, then `a`, then `|H|`, then `H` lexicographically. `H` ranges
/// over nonempty subsets of `{1..r}`.
pub fn brute_witness(set: &ZSet, columns: &[Vec<i64>], r: usize, a_bound: i64) -> Option<(i64, BTreeSet<usize>)> {
    let mut subsets: Vec<Vec<usize>> = (1u32..(1u32 << r))
        .map(|mask| (0..r).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect())
        .collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let mut candidates: Vec<i64> = (-a_bound..=a_bound).collect();
    candidates.sort_by_key(|&a| (a.abs(), a));
    for a in candidates {
        for h in &subsets {
            if columns
                .iter()
                .all(|col| set.contains(&big(a + h.iter().map(|&t| col[t - 1]).sum::<i64>())))
            {
                return Some((a, h.iter().copied().collect()));
            }
        }
    }
    None
}

pub fn abs_max(xs: &[BigInt]) -> BigInt {
    xs.iter().map(|x| x.abs()).max().unwrap_or_default()
}
