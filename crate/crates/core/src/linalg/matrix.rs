use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("matrix must be at least 1x1".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for literals; panics on ragged or empty input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("well-formed literal matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        numeric::int_vec_vec::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = numeric::int_vec_vec::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Dense row-major matrix of exact rationals. Entries are kept in lowest
/// terms with positive denominators by `BigRational` itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("matrix must be at least 1x1".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses `"p/q"` / `"p"` cells, e.g. `RatMatrix::parse(&[&["1/2", "1/3"]])`.
    pub fn parse(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        numeric::parse_rational(cell).ok_or_else(|| {
                            Error::config("matrix", format!("invalid rational `{cell}`"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|&x| BigRational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
        .expect("well-formed literal matrix")
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigRational> {
        self.data.iter()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    /// Exact product with an integer vector.
    pub fn mul_int_vec(&self, y: &[BigInt]) -> Result<Vec<BigRational>> {
        if y.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                y.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(y)
                    .map(|(a, b)| a * BigRational::from_integer(b.clone()))
                    .sum()
            })
            .collect())
    }

    /// The least common multiple of the denominators of row `i`.
    pub(crate) fn row_denominator(&self, i: usize) -> BigInt {
        self.row(i)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", numeric::format_rational(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        numeric::rat_vec_vec::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = numeric::rat_vec_vec::deserialize(d)?;
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Integer multiple of a rational that is known to be integral.
pub(crate) fn as_integer(x: &BigRational) -> Option<BigInt> {
    x.denom().is_one().then(|| x.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        assert_eq!(
            IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).determinant().unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])
                .determinant()
                .unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            IntMatrix::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])
                .determinant()
                .unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(IntMatrix::from_rows(vec![]).is_err());
        assert!(IntMatrix::from_rows(vec![vec![BigInt::one()], vec![]]).is_err());
        assert!(RatMatrix::parse(&[&["1", "2"], &["3"]]).is_err());
    }

    #[test]
    fn matrix_json_shape() {
        let a = RatMatrix::parse(&[&["1/2", "1/2"], &["-3", "4/6"]]).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"[["1/2","1/2"],["-3","2/3"]]"#);
        let back: RatMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let mixed: RatMatrix = serde_json::from_str(r#"[[1, "1/3"]]"#).unwrap();
        assert_eq!(mixed, RatMatrix::parse(&[&["1", "1/3"]]).unwrap());
    }
}
