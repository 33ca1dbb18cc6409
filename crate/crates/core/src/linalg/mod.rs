//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. The main consumers are the
//! constant-image questions: given a rational matrix `A`, is there an integer
//! vector `x` with `A x = (a, a, ..., a)`?

mod matrix;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use matrix::{IntMatrix, RatMatrix};
pub(crate) use matrix::as_integer;
pub use snf::{smith_normal_form, SnfDecomposition};

use crate::error::{Error, Result};

/// Returns `(d, d·A)` where `d` is the least positive integer making every
/// entry integral, i.e. the lcm of all entry denominators.
pub fn clear_denominators(a: &RatMatrix) -> (BigInt, IntMatrix) {
    let d = a.entries().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let rows = a
        .to_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let scaled = x * BigRational::from_integer(d.clone());
                    debug_assert!(scaled.denom().is_one());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    (d, IntMatrix::from_rows(rows).expect("dimensions carried over"))
}

/// Solves `M x = b` over the integers.
///
/// Solvability is decided on the Smith form `U M V = S`: with `y = U b`
/// every `y_i` for a nonzero `s_i` must be divisible by it and every `y_i`
/// past the rank must vanish. The particular solution sets the free
/// coordinates to zero and is then shortened by one nearest-integer pass
/// against each kernel column of `V`, in column order. The result is a
/// deterministic function of `(M, b)`.
pub fn solve_linear_diophantine(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::ContractViolation(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let snf = smith_normal_form(m);
    let y = snf.u.mul_vec(b)?;
    let diag = snf.diagonal();
    let rank = snf.rank();

    let mut z = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < rank {
            let (q, r) = y[i].div_rem(&diag[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !y[i].is_zero() {
            return Ok(None);
        }
    }

    let mut x = snf.v.mul_vec(&z)?;
    for j in rank..m.cols() {
        let k = snf.v.column(j);
        let num: BigInt = x.iter().zip(&k).map(|(a, b)| a * b).sum();
        let den: BigInt = k.iter().map(|c| c * c).sum();
        // round(num / den), halves rounded up
        let q = (BigInt::from(2) * num + &den).div_floor(&(BigInt::from(2) * den));
        if !q.is_zero() {
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi -= &q * ki;
            }
        }
    }
    debug_assert_eq!(m.mul_vec(&x)?, b);
    Ok(Some(x))
}

/// An integer `x` with `A x = (a, ..., a)`, found by solving
/// `(dA) x = (d·a, ..., d·a)` over the integers.
pub fn solve_constant_image(a: &RatMatrix, value: &BigInt) -> Option<Vec<BigInt>> {
    let (d, m) = clear_denominators(a);
    let rhs = vec![&d * value; m.rows()];
    solve_linear_diophantine(&m, &rhs).expect("rhs sized to the matrix")
}

/// Whether every constant vector `(a, ..., a)` is an integer image of `A`.
///
/// Only `a = 1` is tried: a solution `x₁` for `a = 1` gives `a·x₁` for any
/// other `a`, and the converse direction is the instance `a = 1` itself.
pub fn has_constant_image_property(a: &RatMatrix) -> bool {
    solve_constant_image(a, &BigInt::one()).is_some()
}
