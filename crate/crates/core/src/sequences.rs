//! Finite prefixes of integer and integer-vector sequences.
//!
//! All indexing is 1-based: `at(1)` is the first term, matching index sets
//! such as `{1, 2, ..., r}` used everywhere else in the crate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// A finite set of 1-based sequence indices.
pub type IndexSet = BTreeSet<usize>;

fn check_indices(k: &IndexSet, len: usize) -> Result<()> {
    if k.contains(&0) {
        return Err(Error::ContractViolation("sequence indices start at 1".into()));
    }
    match k.last() {
        Some(&max) if max > len => Err(Error::PrefixTooShort {
            required: BigInt::from(max),
            available: len,
        }),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntSeq {
    #[serde(with = "numeric::int_vec")]
    values: Vec<BigInt>,
}

impl IntSeq {
    pub fn new(values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ContractViolation("sequence prefix must be nonempty".into()));
        }
        Ok(IntSeq { values })
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| BigInt::from(x)).collect()).expect("nonempty literal")
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> BigInt) -> Self {
        Self::new((1..=len).map(f).collect()).expect("nonempty prefix")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Term `t` (1-based).
    pub fn at(&self, t: usize) -> Option<&BigInt> {
        t.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Σ_{t∈K} f(t); the empty sum is 0.
    pub fn block_sum(&self, k: &IndexSet) -> Result<BigInt> {
        check_indices(k, self.len())?;
        Ok(k.iter().map(|&t| &self.values[t - 1]).sum())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VecSeqRepr", into = "VecSeqRepr")]
pub struct VecSeq {
    dim: usize,
    values: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct VecSeqRepr {
    dim: usize,
    #[serde(with = "numeric::int_vec_vec")]
    values: Vec<Vec<BigInt>>,
}

impl TryFrom<VecSeqRepr> for VecSeq {
    type Error = Error;

    fn try_from(r: VecSeqRepr) -> Result<Self> {
        VecSeq::new(r.dim, r.values)
    }
}

impl From<VecSeq> for VecSeqRepr {
    fn from(v: VecSeq) -> Self {
        VecSeqRepr {
            dim: v.dim,
            values: v.values,
        }
    }
}

impl VecSeq {
    pub fn new(dim: usize, values: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 || values.is_empty() {
            return Err(Error::ContractViolation(
                "vector sequences need dimension and length at least 1".into(),
            ));
        }
        if let Some(t) = values.iter().position(|x| x.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "term {} has dimension {}, expected {dim}",
                t + 1,
                values[t].len()
            )));
        }
        Ok(VecSeq { dim, values })
    }

    pub fn from_fn(dim: usize, len: usize, f: impl Fn(usize) -> Vec<BigInt>) -> Result<Self> {
        Self::new(dim, (1..=len).map(f).collect())
    }

    /// Assemble from coordinate sequences of equal length.
    pub fn from_coordinates(coords: &[IntSeq]) -> Result<Self> {
        let len = coords.first().map_or(0, IntSeq::len);
        if coords.iter().any(|c| c.len() != len) {
            return Err(Error::DimensionMismatch(
                "coordinate sequences differ in length".into(),
            ));
        }
        Self::new(
            coords.len(),
            (0..len)
                .map(|t| coords.iter().map(|c| c.values[t].clone()).collect())
                .collect(),
        )
    }

    /// A scalar sequence viewed as a 1-dimensional vector sequence.
    pub fn from_scalar(f: &IntSeq) -> Self {
        VecSeq {
            dim: 1,
            values: f.values.iter().map(|x| vec![x.clone()]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, t: usize) -> Option<&[BigInt]> {
        t.checked_sub(1)
            .and_then(|i| self.values.get(i))
            .map(Vec::as_slice)
    }

    /// Coordinate `i` (1-based) as a scalar sequence.
    pub fn project(&self, i: usize) -> Result<IntSeq> {
        if i == 0 || i > self.dim {
            return Err(Error::ContractViolation(format!(
                "projection index {i} outside 1..={}",
                self.dim
            )));
        }
        Ok(IntSeq {
            values: self.values.iter().map(|x| x[i - 1].clone()).collect(),
        })
    }

    pub fn block_sum(&self, k: &IndexSet) -> Result<Vec<BigInt>> {
        check_indices(k, self.len())?;
        let mut acc = vec![BigInt::zero(); self.dim];
        for &t in k {
            for (a, x) in acc.iter_mut().zip(&self.values[t - 1]) {
                *a += x;
            }
        }
        Ok(acc)
    }
}

/// A nonempty finite family of vector sequences of one dimension and length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<VecSeq>", into = "Vec<VecSeq>")]
pub struct SeqFamily {
    members: Vec<VecSeq>,
}

impl TryFrom<Vec<VecSeq>> for SeqFamily {
    type Error = Error;

    fn try_from(members: Vec<VecSeq>) -> Result<Self> {
        SeqFamily::new(members)
    }
}

impl From<SeqFamily> for Vec<VecSeq> {
    fn from(f: SeqFamily) -> Self {
        f.members
    }
}

impl SeqFamily {
    pub fn new(members: Vec<VecSeq>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::ContractViolation("a family needs at least one member".into()));
        };
        let (dim, len) = (first.dim(), first.len());
        if members.iter().any(|f| f.dim() != dim || f.len() != len) {
            return Err(Error::DimensionMismatch(
                "family members must share dimension and length".into(),
            ));
        }
        Ok(SeqFamily { members })
    }

    pub fn from_scalars(seqs: &[IntSeq]) -> Result<Self> {
        Self::new(seqs.iter().map(VecSeq::from_scalar).collect())
    }

    /// `m` members of dimension `dim` and length `len`, entries uniform in
    /// `[lo, hi]`, drawn member-major, then term, then coordinate.
    pub fn seeded_uniform(seed: u64, m: usize, dim: usize, len: usize, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::config("range", format!("empty range [{lo}, {hi}]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = (0..m)
            .map(|_| {
                VecSeq::new(
                    dim,
                    (0..len)
                        .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect())
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn members(&self) -> &[VecSeq] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn len(&self) -> usize {
        self.members[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member `j` of the result is the scalar sequence `t ↦ f_j(t)`,
    /// the adapter from the sequence form to the matrix form of the
    /// combinatorially rich condition (scalar families only).
    pub fn scalar_members(&self) -> Result<Vec<IntSeq>> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch(
                "scalar view of a vector family".into(),
            ));
        }
        self.members.iter().map(|f| f.project(1)).collect()
    }
}

/// All `m·v` coordinate projections of a family, member-major and
/// coordinate-minor. Duplicates are kept.
pub fn projection_family(family: &SeqFamily) -> Vec<IntSeq> {
    family
        .members()
        .iter()
        .flat_map(|f| (1..=f.dim()).map(move |i| f.project(i).expect("index in range")))
        .collect()
}

/// Deterministic sequence descriptors used by configs and tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeqGenerator {
    Constant {
        #[serde(with = "numeric::int")]
        value: BigInt,
    },
    /// `start + (t - 1)·step`
    Arithmetic {
        #[serde(with = "numeric::int")]
        start: BigInt,
        #[serde(with = "numeric::int")]
        step: BigInt,
    },
    /// `start · ratio^(t - 1)`
    Geometric {
        #[serde(with = "numeric::int")]
        start: BigInt,
        #[serde(with = "numeric::int")]
        ratio: BigInt,
    },
    /// `c_0 + c_1·t + c_2·t² + ...`
    Polynomial {
        #[serde(with = "numeric::int_vec")]
        coefficients: Vec<BigInt>,
    },
    /// Explicit terms; for dimension `v > 1` the table is read term-major.
    Table {
        #[serde(with = "numeric::int_vec")]
        values: Vec<BigInt>,
    },
    /// Seeded uniform draws from `[lo, hi]`.
    Uniform { lo: i64, hi: i64, seed: u64 },
}

impl SeqGenerator {
    pub fn generate(&self, len: usize) -> Result<IntSeq> {
        let v = make_sequence(self, len, 1)?;
        v.project(1)
    }

    pub(crate) fn set_seed(&mut self, new_seed: u64) {
        if let SeqGenerator::Uniform { seed, .. } = self {
            *seed = new_seed;
        }
    }
}

fn eval_poly(coefficients: &[BigInt], t: usize) -> BigInt {
    let t = BigInt::from(t);
    coefficients
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * &t + c)
}

/// Materialize `len` terms of dimension `dim`. Non-random descriptors give
/// the same value in every coordinate; `Uniform` draws term-major.
pub fn make_sequence(kind: &SeqGenerator, len: usize, dim: usize) -> Result<VecSeq> {
    if len == 0 || dim == 0 {
        return Err(Error::config("length", "length and dimension must be at least 1"));
    }
    let scalar = |f: &dyn Fn(usize) -> BigInt| -> Result<VecSeq> {
        VecSeq::from_fn(dim, len, |t| vec![f(t); dim])
    };
    match kind {
        SeqGenerator::Constant { value } => scalar(&|_| value.clone()),
        SeqGenerator::Arithmetic { start, step } => scalar(&|t| start + step * BigInt::from(t - 1)),
        SeqGenerator::Geometric { start, ratio } => {
            let mut term = start.clone();
            let mut values = Vec::with_capacity(len);
            for _ in 0..len {
                values.push(vec![term.clone(); dim]);
                term *= ratio;
            }
            VecSeq::new(dim, values)
        }
        SeqGenerator::Polynomial { coefficients } => {
            if coefficients.is_empty() {
                return Err(Error::config("coefficients", "polynomial needs coefficients"));
            }
            scalar(&|t| eval_poly(coefficients, t))
        }
        SeqGenerator::Table { values } => {
            if values.len() < len * dim {
                return Err(Error::config(
                    "values",
                    format!("table has {} entries, need {}", values.len(), len * dim),
                ));
            }
            VecSeq::new(dim, values[..len * dim].chunks(dim).map(<[_]>::to_vec).collect())
        }
        SeqGenerator::Uniform { lo, hi, seed } => {
            if lo > hi {
                return Err(Error::config("lo", format!("empty range [{lo}, {hi}]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            VecSeq::new(
                dim,
                (0..len)
                    .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(*lo..=*hi))).collect())
                    .collect(),
            )
        }
    }
}

/// Per-coordinate generators assembled into one vector sequence.
pub fn make_vec_sequence(coords: &[SeqGenerator], len: usize) -> Result<VecSeq> {
    if coords.is_empty() {
        return Err(Error::config("coordinates", "at least one coordinate generator"));
    }
    let seqs = coords
        .iter()
        .map(|g| g.generate(len))
        .collect::<Result<Vec<_>>>()?;
    VecSeq::from_coordinates(&seqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ks(v: &[usize]) -> IndexSet {
        v.iter().copied().collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn one() -> BigInt {
        BigInt::one()
    }

    #[test]
    fn projections() {
        let f = VecSeq::from_fn(2, 5, |t| ints(&[t as i64, 2 * t as i64])).unwrap();
        assert_eq!(f.project(2).unwrap(), IntSeq::from_i64(&[2, 4, 6, 8, 10]));

        let c = VecSeq::from_fn(2, 3, |_| ints(&[5, -1])).unwrap();
        assert_eq!(c.project(1).unwrap(), IntSeq::from_i64(&[5, 5, 5]));

        let p = VecSeq::from_fn(3, 4, |t| {
            let t = t as i64;
            ints(&[t * t, t, 1])
        })
        .unwrap();
        assert_eq!(p.project(3).unwrap(), IntSeq::from_i64(&[1, 1, 1, 1]));

        assert!(matches!(p.project(0), Err(Error::ContractViolation(_))));
        assert!(matches!(p.project(4), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn projection_family_order_and_duplicates() {
        let f = VecSeq::from_fn(2, 3, |t| ints(&[t as i64, t as i64])).unwrap();
        let fam = SeqFamily::new(vec![f]).unwrap();
        let l = projection_family(&fam);
        assert_eq!(l.len(), 2);
        assert_eq!(l[0], l[1]);

        let a = IntSeq::from_i64(&[1, 2]);
        let b = IntSeq::from_i64(&[7, 8]);
        let fam = SeqFamily::from_scalars(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(projection_family(&fam), vec![a, b]);

        let f = VecSeq::new(2, vec![ints(&[1, 2]), ints(&[3, 4])]).unwrap();
        let g = VecSeq::new(2, vec![ints(&[5, 6]), ints(&[7, 8])]).unwrap();
        let fam = SeqFamily::new(vec![f, g]).unwrap();
        let l = projection_family(&fam);
        assert_eq!(
            l,
            vec![
                IntSeq::from_i64(&[1, 3]),
                IntSeq::from_i64(&[2, 4]),
                IntSeq::from_i64(&[5, 7]),
                IntSeq::from_i64(&[6, 8]),
            ]
        );
    }

    #[test]
    fn block_sums() {
        let f = IntSeq::from_fn(5, BigInt::from);
        assert_eq!(f.block_sum(&ks(&[1, 3])).unwrap(), BigInt::from(4));
        assert_eq!(f.block_sum(&ks(&[])).unwrap(), BigInt::zero());

        let g = VecSeq::from_fn(2, 5, |t| ints(&[t as i64, 1])).unwrap();
        assert_eq!(g.block_sum(&ks(&[2, 5])).unwrap(), ints(&[7, 2]));
        assert_eq!(g.block_sum(&ks(&[])).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn block_sum_past_prefix_names_required_length() {
        let f = IntSeq::from_i64(&[1, 2, 3]);
        match f.block_sum(&ks(&[2, 9])) {
            Err(Error::PrefixTooShort { required, available }) => {
                assert_eq!(required, BigInt::from(9));
                assert_eq!(available, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(f.block_sum(&ks(&[0])), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn generators() {
        let zero = SeqGenerator::Constant { value: BigInt::zero() };
        assert_eq!(zero.generate(5).unwrap(), IntSeq::from_i64(&[0; 5]));

        let ap = SeqGenerator::Arithmetic { start: one(), step: one() };
        assert_eq!(ap.generate(4).unwrap(), IntSeq::from_i64(&[1, 2, 3, 4]));

        let pow2 = SeqGenerator::Geometric { start: BigInt::from(2), ratio: BigInt::from(2) };
        assert_eq!(pow2.generate(4).unwrap(), IntSeq::from_i64(&[2, 4, 8, 16]));

        let sq = SeqGenerator::Polynomial { coefficients: ints(&[1, 0, 1]) };
        assert_eq!(sq.generate(3).unwrap(), IntSeq::from_i64(&[2, 5, 10]));

        let table = SeqGenerator::Table { values: ints(&[1, 2, 3, 4]) };
        let v = make_sequence(&table, 2, 2).unwrap();
        assert_eq!(v.at(2).unwrap(), ints(&[3, 4]).as_slice());
        assert!(matches!(table.generate(5), Err(Error::Config { .. })));
    }

    #[test]
    fn seeded_uniform_is_pinned() {
        let g = SeqGenerator::Uniform { lo: -9, hi: 9, seed: 7 };
        let a = g.generate(3).unwrap();
        assert_eq!(a, g.generate(3).unwrap());
        // Frozen from the first run of the ChaCha8 stream for seed 7.
        assert_eq!(a, IntSeq::from_i64(&SEED7_TRIPLE));
        assert!(a.values().iter().all(|x| *x >= BigInt::from(-9) && *x <= BigInt::from(9)));
    }

    const SEED7_TRIPLE: [i64; 3] = [-6, 4, 2];

    #[test]
    fn malformed_descriptors() {
        let bad = SeqGenerator::Uniform { lo: 3, hi: 1, seed: 0 };
        assert!(matches!(bad.generate(2), Err(Error::Config { .. })));
        let empty = SeqGenerator::Polynomial { coefficients: vec![] };
        assert!(matches!(empty.generate(2), Err(Error::Config { .. })));
        let parsed: std::result::Result<SeqGenerator, _> =
            serde_json::from_str(r#"{"kind":"arithmetic","start":1}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn family_validation() {
        let a = VecSeq::from_fn(2, 3, |_| ints(&[0, 0])).unwrap();
        let b = VecSeq::from_fn(1, 3, |_| ints(&[0])).unwrap();
        assert!(SeqFamily::new(vec![a, b]).is_err());
        assert!(SeqFamily::new(vec![]).is_err());
    }
}
