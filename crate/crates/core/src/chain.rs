//! Decreasing chains `C_1 ⊇ C_2 ⊇ ... ⊇ C_M` with the shift property
//! `C_m ⊆ -x + C_n`, and their transport through a rational matrix.
//!
//! Infinite sets are only ever compared on finite windows, so every check
//! here is evidence on a window, not a proof.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{as_integer, RatMatrix};
use crate::numeric;
use crate::sets::{preimage_set, BoxWindow, GroupPoint, Region, ZSet, ZvSet};

/// A precomputed answer for the shift index of `x` at level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftHint {
    pub n: usize,
    #[serde(with = "numeric::int")]
    pub x: BigInt,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrChain<S> {
    /// `sets[n - 1]` is `C_n`.
    pub sets: Vec<S>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shift_hint: Vec<ShiftHint>,
}

impl<S> CrChain<S> {
    pub fn new(sets: Vec<S>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::ContractViolation("a chain needs at least one set".into()));
        }
        Ok(CrChain { sets, shift_hint: Vec::new() })
    }

    pub fn with_hints(mut self, hints: Vec<ShiftHint>) -> Self {
        self.shift_hint = hints;
        self
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `C_n`, 1-based.
    pub fn level(&self, n: usize) -> Result<&S> {
        n.checked_sub(1).and_then(|i| self.sets.get(i)).ok_or_else(|| {
            Error::ContractViolation(format!("chain level {n} outside 1..={}", self.sets.len()))
        })
    }

    fn hint(&self, n: usize, x: &BigInt) -> Option<usize> {
        self.shift_hint.iter().find(|h| h.n == n && h.x == *x).map(|h| h.m)
    }
}

/// The model chain `C_n = 2^n·ℤ`, `n = 1..=len`.
pub fn powers_of_two_chain(len: usize) -> CrChain<ZSet> {
    CrChain {
        sets: (1..=len)
            .map(|n| ZSet::multiples(num_traits::pow(BigInt::from(2), n)))
            .collect(),
        shift_hint: Vec::new(),
    }
}

/// `D_n = {y ∈ ℤ^v : A y ∈ C_n^u}` for every level. Hints describe the
/// scalar chain and are not carried over.
pub fn chain_preimage(a: &RatMatrix, chain: &CrChain<ZSet>) -> CrChain<ZvSet> {
    CrChain {
        sets: chain.sets.iter().map(|c| preimage_set(a, c)).collect(),
        shift_hint: Vec::new(),
    }
}

/// Whether `C_{n+1} ⊆ C_n` for every `n` on the window.
pub fn is_decreasing_on<R: Region>(chain: &CrChain<R>, window: &R::Window, max_points: u64) -> Result<bool> {
    for pair in chain.sets.windows(2) {
        let inner = pair[1].enumerate_window(window, max_points)?;
        if !inner.iter().all(|p| pair[0].contains(p)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every member `p` of `C_m` in the window has `x + p ∈ C_n`.
///
/// Any levels `1 ≤ n, m ≤ M` are accepted so that failing pairs such as
/// `m < n` can be tested. `x` must lie in `C_n`.
pub fn verify_chain_shift<R: Region>(
    chain: &CrChain<R>,
    n: usize,
    x: &R::Point,
    m: usize,
    window: &R::Window,
    max_points: u64,
) -> Result<bool> {
    let c_n = chain.level(n)?;
    let c_m = chain.level(m)?;
    if !c_n.contains(x) {
        return Err(Error::ContractViolation(format!("{x:?} is not in level {n} of the chain")));
    }
    Ok(c_m
        .enumerate_window(window, max_points)?
        .iter()
        .all(|p| c_n.contains(&x.add(p))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftIndex {
    /// `s_i`, row `i` of `A y`.
    #[serde(with = "numeric::int_vec")]
    pub row_images: Vec<BigInt>,
    /// `m_i` for each row.
    pub row_indices: Vec<usize>,
    /// `max m_i`.
    pub m: usize,
    /// `D_m ⊆ -y + D_n` on the box.
    pub window_check: bool,
}

/// Symmetric integer interval holding row `i` of `A y` for every `y` in the box.
pub(crate) fn row_window(a: &RatMatrix, i: usize, window: &BoxWindow) -> (BigInt, BigInt) {
    let reach: BigRational = a
        .row(i)
        .iter()
        .zip(window.lo.iter().zip(&window.hi))
        .map(|(aij, (lo, hi))| aij.abs() * BigRational::from_integer(lo.abs().max(hi.abs())))
        .sum();
    let r = reach.numer().div_ceil(reach.denom());
    (-r.clone(), r)
}

/// The shift index of `y ∈ D_n`: for each row image `s_i = Σ_j a_ij y_j`
/// the least `m_i ≤ m_max` with `C_{m_i} ⊆ -s_i + C_n` on the window
/// (a matching hint is tried first and used if it checks out), then
/// `m = max m_i`, followed by the check `D_m ⊆ -y + D_n` on the box.
#[allow(clippy::too_many_arguments)]
pub fn find_shift_index(
    preimage_chain: &CrChain<ZvSet>,
    a: &RatMatrix,
    chain: &CrChain<ZSet>,
    n: usize,
    y: &[BigInt],
    window: &BoxWindow,
    m_max: usize,
    max_points: u64,
) -> Result<ShiftIndex> {
    if preimage_chain.len() != chain.len() {
        return Err(Error::DimensionMismatch("chains of different lengths".into()));
    }
    let d_n = preimage_chain.level(n)?;
    if !d_n.contains(y) {
        return Err(Error::ContractViolation(format!("{y:?} is not in level {n} of the preimage chain")));
    }
    shift_index_with(a, chain, n, y, window, m_max, max_points, |m| {
        verify_chain_shift(preimage_chain, n, &y.to_vec(), m, window, max_points)
    })
}

#[allow(clippy::too_many_arguments)]
fn shift_index_with(
    a: &RatMatrix,
    chain: &CrChain<ZSet>,
    n: usize,
    y: &[BigInt],
    window: &BoxWindow,
    m_max: usize,
    max_points: u64,
    window_check: impl FnOnce(usize) -> Result<bool>,
) -> Result<ShiftIndex> {
    if window.dim() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional box for a matrix with {} columns",
            window.dim(),
            a.cols()
        )));
    }
    let row_images: Vec<BigInt> = a
        .mul_int_vec(y)?
        .iter()
        .map(|s| as_integer(s).expect("members of D_n have integral images"))
        .collect();

    let top = m_max.min(chain.len());
    let mut row_indices = Vec::with_capacity(row_images.len());
    for (i, s) in row_images.iter().enumerate() {
        let w = row_window(a, i, window);
        let hinted = match chain.hint(n, s) {
            Some(h) if h <= top && verify_chain_shift(chain, n, s, h, &w, max_points)? => Some(h),
            _ => None,
        };
        let found = match hinted {
            Some(h) => Some(h),
            None => {
                let mut hit = None;
                for m in 1..=top {
                    if verify_chain_shift(chain, n, s, m, &w, max_points)? {
                        hit = Some(m);
                        break;
                    }
                }
                hit
            }
        };
        let m_i = found.ok_or_else(|| {
            Error::Exhausted(format!("no level up to {top} shifts into level {n} by row image {s}"))
        })?;
        row_indices.push(m_i);
    }
    let m = *row_indices.iter().max().expect("matrix has rows");
    let window_check = window_check(m)?;
    Ok(ShiftIndex { row_images, row_indices, m, window_check })
}

/// Least `m ≤ m_max` with `D_m ⊆ -y + D_n` on the box, by enumeration.
pub fn brute_force_shift_index<R: Region>(
    chain: &CrChain<R>,
    n: usize,
    y: &R::Point,
    window: &R::Window,
    m_max: usize,
    max_points: u64,
) -> Result<Option<usize>> {
    for m in 1..=m_max.min(chain.len()) {
        if verify_chain_shift(chain, n, y, m, window, max_points)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A chain together with the members of every level inside one window,
/// enumerated once so that repeated shift checks only test membership.
#[derive(Clone, Debug)]
pub struct WindowedChain<'a, R: Region> {
    chain: &'a CrChain<R>,
    members: Vec<Vec<R::Point>>,
}

impl<'a, R: Region> WindowedChain<'a, R> {
    pub fn new(chain: &'a CrChain<R>, window: &R::Window, max_points: u64) -> Result<Self> {
        let members = chain
            .sets
            .iter()
            .map(|s| s.enumerate_window(window, max_points))
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowedChain { chain, members })
    }

    pub fn chain(&self) -> &CrChain<R> {
        self.chain
    }

    /// Members of `C_n` in the window.
    pub fn members(&self, n: usize) -> Result<&[R::Point]> {
        self.chain.level(n)?;
        Ok(&self.members[n - 1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.members
            .iter()
            .skip(1)
            .zip(&self.chain.sets)
            .all(|(inner, outer)| inner.iter().all(|p| outer.contains(p)))
    }

    /// Same as [`verify_chain_shift`] on the cached window.
    pub fn shift_holds(&self, n: usize, x: &R::Point, m: usize) -> Result<bool> {
        let c_n = self.chain.level(n)?;
        let c_m = self.members(m)?;
        if !c_n.contains(x) {
            return Err(Error::ContractViolation(format!("{x:?} is not in level {n} of the chain")));
        }
        Ok(c_m.iter().all(|p| c_n.contains(&x.add(p))))
    }

    /// Same as [`brute_force_shift_index`] on the cached window.
    pub fn least_shift(&self, n: usize, x: &R::Point, m_max: usize) -> Result<Option<usize>> {
        for m in 1..=m_max.min(self.chain.len()) {
            if self.shift_holds(n, x, m)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

impl WindowedChain<'_, ZvSet> {
    /// Same as [`find_shift_index`], with the closing window check run on
    /// the cached members.
    #[allow(clippy::too_many_arguments)]
    pub fn find_shift_index(
        &self,
        a: &RatMatrix,
        chain: &CrChain<ZSet>,
        n: usize,
        y: &[BigInt],
        window: &BoxWindow,
        m_max: usize,
        max_points: u64,
    ) -> Result<ShiftIndex> {
        if self.chain.len() != chain.len() {
            return Err(Error::DimensionMismatch("chains of different lengths".into()));
        }
        if !self.chain.level(n)?.contains(y) {
            return Err(Error::ContractViolation(format!("{y:?} is not in level {n} of the preimage chain")));
        }
        shift_index_with(a, chain, n, y, window, m_max, max_points, |m| self.shift_holds(n, &y.to_vec(), m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::DEFAULT_MAX_POINTS;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| b(x)).collect()
    }

    fn line() -> (BigInt, BigInt) {
        (b(-64), b(64))
    }

    #[test]
    fn scalar_shift_examples() {
        let c = powers_of_two_chain(3);
        assert!(verify_chain_shift(&c, 1, &b(2), 1, &line(), DEFAULT_MAX_POINTS).unwrap());
        assert!(verify_chain_shift(&c, 2, &b(4), 2, &line(), DEFAULT_MAX_POINTS).unwrap());
        assert!(!verify_chain_shift(&c, 2, &b(4), 1, &line(), DEFAULT_MAX_POINTS).unwrap());
        assert!(matches!(
            verify_chain_shift(&c, 2, &b(2), 2, &line(), DEFAULT_MAX_POINTS),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn preimage_chain_membership() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        let d = chain_preimage(&a, &powers_of_two_chain(3));
        let w = BoxWindow::cube(2, -8, 8);
        for y in w.points(DEFAULT_MAX_POINTS).unwrap() {
            let (p, q) = (&y[0] + &y[1], &y[0] - &y[1]);
            for n in 1..=3u32 {
                let m = b(2).pow(n);
                let expected = (&p % &m) == b(0) && (&q % &m) == b(0);
                assert_eq!(d.sets[n as usize - 1].contains(&y), expected);
            }
        }
        assert!(is_decreasing_on(&d, &w, DEFAULT_MAX_POINTS).unwrap());
    }

    #[test]
    fn shift_index_examples() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        let c = powers_of_two_chain(4);
        let d = chain_preimage(&a, &c);
        let w = BoxWindow::cube(2, -16, 16);

        let r = find_shift_index(&d, &a, &c, 1, &ints(&[2, 0]), &w, 4, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(r.row_images, ints(&[2, 2]));
        assert_eq!(r.row_indices, vec![1, 1]);
        assert_eq!(r.m, 1);
        assert!(r.window_check);

        let r = find_shift_index(&d, &a, &c, 2, &ints(&[4, 0]), &w, 4, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(r.m, 2);
        assert!(r.window_check);

        assert!(matches!(
            find_shift_index(&d, &a, &c, 2, &ints(&[1, 0]), &w, 4, DEFAULT_MAX_POINTS),
            Err(Error::ContractViolation(_))
        ));
        assert!(matches!(
            find_shift_index(&d, &a, &c, 3, &ints(&[8, 0]), &w, 2, DEFAULT_MAX_POINTS),
            Err(Error::Exhausted(_))
        ));
    }

    #[test]
    fn hints_are_checked_before_use() {
        let a = RatMatrix::from_i64(&[&[1]]);
        let c = powers_of_two_chain(3).with_hints(vec![
            ShiftHint { n: 2, x: b(4), m: 3 },
            ShiftHint { n: 2, x: b(8), m: 1 },
        ]);
        let d = chain_preimage(&a, &c);
        let w = BoxWindow::cube(1, -32, 32);
        let r = find_shift_index(&d, &a, &c, 2, &ints(&[4]), &w, 3, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(r.m, 3);
        let r = find_shift_index(&d, &a, &c, 2, &ints(&[8]), &w, 3, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(r.m, 2);
    }

    #[test]
    fn single_set_chain() {
        let c = CrChain::new(vec![ZSet::multiples(3)]).unwrap();
        assert!(verify_chain_shift(&c, 1, &b(3), 1, &line(), DEFAULT_MAX_POINTS).unwrap());
        assert_eq!(brute_force_shift_index(&c, 1, &b(6), &line(), 1, DEFAULT_MAX_POINTS).unwrap(), Some(1));
    }
}
