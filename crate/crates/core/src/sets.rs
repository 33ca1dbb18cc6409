//! Finitely presented subsets of ℤ and ℤ^v.
//!
//! Membership is exact and always terminates. Sets of vectors include the
//! preimage `{y ∈ ℤ^v : A y ∈ B^u}` of a set of integers under a rational
//! matrix; a point whose image is not integral is simply not a member.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::numeric;
use crate::sequences::IntSeq;

/// Default cap on the number of points an enumeration may visit.
pub const DEFAULT_MAX_POINTS: u64 = 10_000_000;

/// Serialized form of a point of ℤ (a decimal string) or ℤ^v (an array).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Scalar(#[serde(with = "numeric::int")] BigInt),
    Vector(#[serde(with = "numeric::int_vec")] Vec<BigInt>),
}

/// An element of ℤ or ℤ^v.
pub trait GroupPoint: Clone + Ord + Debug {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn origin(dim: usize) -> Self;
    fn encode(&self) -> PointJson;
    fn decode(p: PointJson) -> Option<Self>;
}

impl GroupPoint for BigInt {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn origin(_dim: usize) -> Self {
        BigInt::zero()
    }

    fn encode(&self) -> PointJson {
        PointJson::Scalar(self.clone())
    }

    fn decode(p: PointJson) -> Option<Self> {
        match p {
            PointJson::Scalar(x) => Some(x),
            PointJson::Vector(v) if v.len() == 1 => v.into_iter().next(),
            PointJson::Vector(_) => None,
        }
    }
}

impl GroupPoint for Vec<BigInt> {
    fn add(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + b).collect()
    }

    fn sub(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a - b).collect()
    }

    fn origin(dim: usize) -> Self {
        vec![BigInt::zero(); dim]
    }

    fn encode(&self) -> PointJson {
        PointJson::Vector(self.clone())
    }

    fn decode(p: PointJson) -> Option<Self> {
        match p {
            PointJson::Vector(v) => Some(v),
            PointJson::Scalar(x) => Some(vec![x]),
        }
    }
}

/// Common interface of [`ZSet`] and [`ZvSet`] used by the generic searches.
pub trait Region: Debug {
    type Point: GroupPoint;
    type Window: Clone + Debug;

    fn contains(&self, p: &Self::Point) -> bool;

    /// Members inside `window`, in increasing (lexicographic) order.
    fn enumerate_window(&self, window: &Self::Window, max_points: u64) -> Result<Vec<Self::Point>>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueInterval {
    #[serde(with = "numeric::int")]
    pub lo: BigInt,
    #[serde(with = "numeric::int")]
    pub hi: BigInt,
}

/// A subset of ℤ as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ZSet {
    /// `residue + modulus·ℤ`
    Congruence {
        #[serde(with = "numeric::int")]
        modulus: BigInt,
        #[serde(with = "numeric::int")]
        residue: BigInt,
    },
    Union { sets: Vec<ZSet> },
    Intersection { sets: Vec<ZSet> },
    Complement { set: Box<ZSet> },
    /// Integers whose residue modulo `period` falls in one of the intervals.
    PeriodicIntervals {
        #[serde(with = "numeric::int")]
        period: BigInt,
        intervals: Vec<ResidueInterval>,
    },
    /// Sums `Σ_{t∈H} f(t)` over nonempty `H ⊆ {1..L}` with `|H| ≤ depth`.
    FiniteSums { generator: IntSeq, depth: usize },
    Explicit {
        #[serde(with = "numeric::int_set")]
        elements: BTreeSet<BigInt>,
    },
    /// `offset + set`
    Shift {
        #[serde(with = "numeric::int")]
        offset: BigInt,
        set: Box<ZSet>,
    },
}

impl ZSet {
    pub fn congruence(modulus: impl Into<BigInt>, residue: impl Into<BigInt>) -> Self {
        let modulus = modulus.into();
        let residue = residue.into();
        let residue = if modulus.is_zero() { residue } else { residue.mod_floor(&modulus) };
        ZSet::Congruence { modulus, residue }
    }

    /// `d·ℤ`
    pub fn multiples(d: impl Into<BigInt>) -> Self {
        Self::congruence(d, 0)
    }

    pub fn all() -> Self {
        Self::congruence(1, 0)
    }

    pub fn empty() -> Self {
        ZSet::Explicit { elements: BTreeSet::new() }
    }

    pub fn explicit<I: IntoIterator<Item = i64>>(xs: I) -> Self {
        ZSet::Explicit {
            elements: xs.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn periodic(period: i64, intervals: &[(i64, i64)]) -> Self {
        ZSet::PeriodicIntervals {
            period: BigInt::from(period),
            intervals: intervals
                .iter()
                .map(|&(lo, hi)| ResidueInterval { lo: lo.into(), hi: hi.into() })
                .collect(),
        }
    }

    pub fn shifted(self, offset: impl Into<BigInt>) -> Self {
        ZSet::Shift { offset: offset.into(), set: Box::new(self) }
    }

    pub fn complement(self) -> Self {
        ZSet::Complement { set: Box::new(self) }
    }

    /// Structural checks that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        match self {
            ZSet::Congruence { modulus, .. } if *modulus < BigInt::one() => {
                Err(Error::config("modulus", format!("modulus must be >= 1, got {modulus}")))
            }
            ZSet::PeriodicIntervals { period, intervals } => {
                if *period < BigInt::one() {
                    return Err(Error::config("period", format!("period must be >= 1, got {period}")));
                }
                for iv in intervals {
                    if iv.lo > iv.hi || iv.lo < BigInt::zero() || iv.hi >= *period {
                        return Err(Error::config(
                            "intervals",
                            format!("interval [{}, {}] is not a residue range mod {period}", iv.lo, iv.hi),
                        ));
                    }
                }
                Ok(())
            }
            ZSet::Union { sets } | ZSet::Intersection { sets } => {
                sets.iter().try_for_each(ZSet::validate)
            }
            ZSet::Complement { set } | ZSet::Shift { set, .. } => set.validate(),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        match self {
            ZSet::Congruence { modulus, residue } => {
                if modulus.is_zero() {
                    x == residue
                } else {
                    x.mod_floor(modulus) == residue.mod_floor(modulus)
                }
            }
            ZSet::Union { sets } => sets.iter().any(|s| s.contains(x)),
            ZSet::Intersection { sets } => sets.iter().all(|s| s.contains(x)),
            ZSet::Complement { set } => !set.contains(x),
            ZSet::PeriodicIntervals { period, intervals } => {
                let r = x.mod_floor(period);
                intervals.iter().any(|iv| iv.lo <= r && r <= iv.hi)
            }
            ZSet::FiniteSums { generator, depth } => {
                finite_sum_hits(generator.values(), *depth, x)
            }
            ZSet::Explicit { elements } => elements.contains(x),
            ZSet::Shift { offset, set } => set.contains(&(x - offset)),
        }
    }

    /// Members of `[lo, hi]` in increasing order.
    pub fn enumerate(&self, lo: &BigInt, hi: &BigInt, max_points: u64) -> Result<Vec<BigInt>> {
        if lo > hi {
            return Err(Error::ContractViolation(format!("empty window [{lo}, {hi}]")));
        }
        let count = hi - lo + BigInt::one();
        if count.to_u64().is_none_or(|c| c > max_points) {
            return Err(Error::BudgetExceeded(format!(
                "window of {count} points exceeds the cap of {max_points}"
            )));
        }
        let mut out = Vec::new();
        let mut x = lo.clone();
        while x <= *hi {
            if self.contains(&x) {
                out.push(x.clone());
            }
            x += 1;
        }
        Ok(out)
    }
}

fn finite_sum_hits(values: &[BigInt], depth: usize, target: &BigInt) -> bool {
    fn go(values: &[BigInt], start: usize, left: usize, acc: &BigInt, used: bool, target: &BigInt) -> bool {
        if used && acc == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..values.len()).any(|i| go(values, i + 1, left - 1, &(acc + &values[i]), true, target))
    }
    go(values, 0, depth, &BigInt::zero(), false, target)
}

impl Region for ZSet {
    type Point = BigInt;
    type Window = (BigInt, BigInt);

    fn contains(&self, p: &BigInt) -> bool {
        ZSet::contains(self, p)
    }

    fn enumerate_window(&self, window: &(BigInt, BigInt), max_points: u64) -> Result<Vec<BigInt>> {
        self.enumerate(&window.0, &window.1, max_points)
    }
}

/// `{y ∈ ℤ^v : A y ∈ B^u}` with `A y` required to be integral.
///
/// Each row is kept cleared of denominators, `A_i = M_i / d_i`, so a
/// membership test is an integer dot product and one divisibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "PreimageRepr", into = "PreimageRepr")]
pub struct PreimageSet {
    matrix: RatMatrix,
    set: ZSet,
    scaled_rows: IntMatrix,
    row_scales: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct PreimageRepr {
    matrix: RatMatrix,
    set: ZSet,
}

impl From<PreimageRepr> for PreimageSet {
    fn from(r: PreimageRepr) -> Self {
        PreimageSet::new(r.matrix, r.set)
    }
}

impl From<PreimageSet> for PreimageRepr {
    fn from(p: PreimageSet) -> Self {
        PreimageRepr { matrix: p.matrix, set: p.set }
    }
}

impl PreimageSet {
    pub fn new(matrix: RatMatrix, set: ZSet) -> Self {
        let row_scales: Vec<BigInt> = (0..matrix.rows()).map(|i| matrix.row_denominator(i)).collect();
        let rows = (0..matrix.rows())
            .map(|i| {
                matrix
                    .row(i)
                    .iter()
                    .map(|x| (x.numer() * &row_scales[i]) / x.denom())
                    .collect()
            })
            .collect();
        let scaled_rows = IntMatrix::from_rows(rows).expect("matrix dimensions are valid");
        PreimageSet { matrix, set, scaled_rows, row_scales }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn set(&self) -> &ZSet {
        &self.set
    }

    /// `A y` when it is integral, `None` otherwise (or on a length mismatch).
    pub fn integral_image(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        if y.len() != self.matrix.cols() {
            return None;
        }
        (0..self.matrix.rows())
            .map(|i| {
                let num: BigInt = self.scaled_rows.row(i).iter().zip(y).map(|(a, b)| a * b).sum();
                let (q, r) = num.div_rem(&self.row_scales[i]);
                r.is_zero().then_some(q)
            })
            .collect()
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        self.integral_image(y)
            .is_some_and(|img| img.iter().all(|x| self.set.contains(x)))
    }
}

/// A box `lo ≤ y ≤ hi` (componentwise) in ℤ^v.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxWindow {
    #[serde(with = "numeric::int_vec")]
    pub lo: Vec<BigInt>,
    #[serde(with = "numeric::int_vec")]
    pub hi: Vec<BigInt>,
}

impl BoxWindow {
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        BoxWindow {
            lo: vec![BigInt::from(lo); dim],
            hi: vec![BigInt::from(hi); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        y.len() == self.lo.len() && y.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| l <= x && x <= h)
    }

    /// Number of lattice points, or `None` if the box is malformed.
    pub fn volume(&self) -> Option<BigInt> {
        if self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return None;
        }
        let mut vol = BigInt::one();
        for (l, h) in self.lo.iter().zip(&self.hi) {
            if l > h {
                return None;
            }
            vol *= h - l + BigInt::one();
        }
        Some(vol)
    }

    /// Every lattice point, last coordinate fastest (lexicographic order).
    pub fn points(&self, max_points: u64) -> Result<Vec<Vec<BigInt>>> {
        let vol = self
            .volume()
            .ok_or_else(|| Error::ContractViolation("malformed box window".into()))?;
        if vol.to_u64().is_none_or(|c| c > max_points) {
            return Err(Error::BudgetExceeded(format!(
                "box of {vol} points exceeds the cap of {max_points}"
            )));
        }
        let mut out = Vec::with_capacity(vol.to_usize().unwrap_or(0));
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] < self.hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = self.lo[i].clone();
            }
        }
    }
}

/// A subset of ℤ^v as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ZvSet {
    Product { factors: Vec<ZSet> },
    Preimage(PreimageSet),
    Explicit {
        #[serde(with = "numeric::int_vec_set")]
        points: BTreeSet<Vec<BigInt>>,
    },
    Shift {
        #[serde(with = "numeric::int_vec")]
        offset: Vec<BigInt>,
        set: Box<ZvSet>,
    },
    Union { sets: Vec<ZvSet> },
    Intersection { sets: Vec<ZvSet> },
    Complement { set: Box<ZvSet> },
}

impl ZvSet {
    /// Ambient dimension, when the descriptor pins one down.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ZvSet::Product { factors } => Some(factors.len()),
            ZvSet::Preimage(p) => Some(p.matrix().cols()),
            ZvSet::Explicit { points } => points.first().map(Vec::len),
            ZvSet::Shift { offset, .. } => Some(offset.len()),
            ZvSet::Union { sets } | ZvSet::Intersection { sets } => sets.iter().find_map(ZvSet::dim),
            ZvSet::Complement { set } => set.dim(),
        }
    }

    /// Exact membership. Vectors of the wrong dimension are never members
    /// of a dimensioned descriptor.
    pub fn contains(&self, y: &[BigInt]) -> bool {
        match self {
            ZvSet::Product { factors } => {
                factors.len() == y.len() && factors.iter().zip(y).all(|(s, x)| s.contains(x))
            }
            ZvSet::Preimage(p) => p.contains(y),
            ZvSet::Explicit { points } => points.contains(y),
            ZvSet::Shift { offset, set } => {
                offset.len() == y.len()
                    && set.contains(&y.iter().zip(offset).map(|(a, b)| a - b).collect::<Vec<_>>())
            }
            ZvSet::Union { sets } => sets.iter().any(|s| s.contains(y)),
            ZvSet::Intersection { sets } => sets.iter().all(|s| s.contains(y)),
            ZvSet::Complement { set } => !set.contains(y),
        }
    }

    pub fn enumerate(&self, window: &BoxWindow, max_points: u64) -> Result<Vec<Vec<BigInt>>> {
        if let Some(d) = self.dim() {
            if d != window.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "set of dimension {d} against a {}-dimensional box",
                    window.dim()
                )));
            }
        }
        Ok(window
            .points(max_points)?
            .into_iter()
            .filter(|y| self.contains(y))
            .collect())
    }
}

impl Region for ZvSet {
    type Point = Vec<BigInt>;
    type Window = BoxWindow;

    fn contains(&self, p: &Vec<BigInt>) -> bool {
        ZvSet::contains(self, p)
    }

    fn enumerate_window(&self, window: &BoxWindow, max_points: u64) -> Result<Vec<Vec<BigInt>>> {
        self.enumerate(window, max_points)
    }
}

/// `{y ∈ ℤ^v : A y ∈ B^u}`
pub fn preimage_set(a: &RatMatrix, b: &ZSet) -> ZvSet {
    ZvSet::Preimage(PreimageSet::new(a.clone(), b.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn congruence_membership() {
        let s = ZSet::congruence(5, 2);
        assert!(s.contains(&b(7)));
        assert!(!s.contains(&b(5)));
        assert!(s.contains(&b(-3)));
        assert_eq!(ZSet::congruence(3, -1), ZSet::congruence(3, 2));
    }

    #[test]
    fn preimage_membership() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        let c = preimage_set(&a, &ZSet::multiples(3));
        assert!(c.contains(&ints(&[3, 0])));
        assert!(!c.contains(&ints(&[1, 0])));

        let half = RatMatrix::parse(&[&["1/2", "1/2"]]).unwrap();
        let c = preimage_set(&half, &ZSet::multiples(2));
        assert!(!c.contains(&ints(&[1, 2])));
        assert!(c.contains(&ints(&[1, 3])));
        assert!(!c.contains(&ints(&[1, 3, 0])));
    }

    #[test]
    fn identity_preimage_is_the_set() {
        let b = ZSet::periodic(7, &[(1, 2), (5, 5)]);
        let c = preimage_set(&RatMatrix::from_i64(&[&[1]]), &b);
        for x in -30..30 {
            assert_eq!(c.contains(&ints(&[x])), b.contains(&BigInt::from(x)));
        }
    }

    #[test]
    fn diagonal_preimage_is_a_product() {
        let a = RatMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let c = preimage_set(&a, &ZSet::multiples(2));
        let prod = ZvSet::Product { factors: vec![ZSet::multiples(2), ZSet::multiples(2)] };
        let w = BoxWindow::cube(2, -6, 6);
        assert_eq!(c.enumerate(&w, 1000).unwrap(), prod.enumerate(&w, 1000).unwrap());
    }

    #[test]
    fn window_enumeration() {
        assert_eq!(ZSet::multiples(2).enumerate(&b(-3), &b(3), 100).unwrap(), ints(&[-2, 0, 2]));
        let e = ZvSet::Explicit { points: BTreeSet::from([ints(&[1, 1])]) };
        assert_eq!(e.enumerate(&BoxWindow::cube(2, 0, 2), 100).unwrap(), vec![ints(&[1, 1])]);
        let pow2 = ZSet::FiniteSums {
            generator: IntSeq::from_i64(&[2, 4, 8]),
            depth: 3,
        };
        assert_eq!(
            pow2.enumerate(&b(1), &b(15), 100).unwrap(),
            ints(&[2, 4, 6, 8, 10, 12, 14])
        );
    }

    #[test]
    fn finite_sums_respect_depth_and_distinctness() {
        let fs = ZSet::FiniteSums { generator: IntSeq::from_i64(&[1, 1, 5]), depth: 2 };
        assert!(fs.contains(&b(2)));
        assert!(fs.contains(&b(6)));
        assert!(!fs.contains(&b(7)));
        assert!(!fs.contains(&b(0)));
        assert!(!fs.contains(&b(3)));
    }

    #[test]
    fn enumeration_cap() {
        let err = ZSet::all().enumerate(&b(0), &b(1000), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        let err = ZvSet::Product { factors: vec![ZSet::all(); 3] }
            .enumerate(&BoxWindow::cube(3, -100, 100), 1000)
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
    }

    #[test]
    fn shift_and_complement() {
        let s = ZSet::multiples(4).shifted(1);
        assert!(s.contains(&b(5)));
        assert!(!s.contains(&b(4)));
        let c = ZSet::multiples(2).complement();
        assert!(c.contains(&b(3)));
        assert!(!c.contains(&b(-2)));
        let v = ZvSet::Shift {
            offset: ints(&[1, -1]),
            set: Box::new(ZvSet::Product { factors: vec![ZSet::multiples(2), ZSet::multiples(2)] }),
        };
        assert!(v.contains(&ints(&[1, -1])));
        assert!(!v.contains(&ints(&[0, 0])));
    }

    #[test]
    fn validation() {
        assert!(ZSet::congruence(0, 0).validate().is_err());
        assert!(ZSet::periodic(10, &[(0, 3)]).validate().is_ok());
        assert!(ZSet::periodic(10, &[(3, 12)]).validate().is_err());
        assert!(ZSet::Union { sets: vec![ZSet::periodic(0, &[])] }.validate().is_err());
    }

    #[test]
    fn descriptor_json_round_trip() {
        let a = RatMatrix::parse(&[&["1/2", "1/2"]]).unwrap();
        let s = ZvSet::Union {
            sets: vec![
                preimage_set(&a, &ZSet::Union { sets: vec![ZSet::congruence(3, 1), ZSet::explicit([7])] }),
                ZvSet::Explicit { points: BTreeSet::from([ints(&[0, 0])]) },
            ],
        };
        let text = serde_json::to_string(&s).unwrap();
        let back: ZvSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let parsed: ZSet = serde_json::from_str(
            r#"{"type":"periodic_intervals","period":10,"intervals":[{"lo":0,"hi":3}]}"#,
        )
        .unwrap();
        assert_eq!(parsed, ZSet::periodic(10, &[(0, 3)]));
    }
}
