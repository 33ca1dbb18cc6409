use log::trace;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// `U · M · V = S` with `U`, `V` unimodular and `S` diagonal with each
/// diagonal entry dividing the next. Zero diagonal entries come last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Checks every structural property of the decomposition against `m`.
    pub fn check(&self, m: &IntMatrix) -> bool {
        let Ok(um) = self.u.mul(m) else { return false };
        let Ok(umv) = um.mul(&self.v) else { return false };
        if umv != self.s {
            return false;
        }
        let unimodular = |x: &IntMatrix| x.determinant().map(|d| d.abs() == BigInt::from(1));
        if !matches!(unimodular(&self.u), Ok(true)) || !matches!(unimodular(&self.v), Ok(true)) {
            return false;
        }
        for i in 0..self.s.rows() {
            for j in 0..self.s.cols() {
                if i != j && !self.s[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(|x| x.is_negative()) {
            return false;
        }
        diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        })
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// The pivot at each stage is the nonzero entry of least absolute value in
/// the trailing submatrix, first in row-major order, so the output is a
/// deterministic function of `m`.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&s, t) else {
                trace!("snf: trailing block at {t} is zero");
                return SnfDecomposition { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = &s[(i, t)] / &pivot;
                let neg = -q;
                s.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &s[(t, j)] / &pivot;
                let neg = -q;
                s.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = BigInt::from(1);
                s.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }

            if pivot.is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    SnfDecomposition { u, s, v }
}

fn smallest_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
