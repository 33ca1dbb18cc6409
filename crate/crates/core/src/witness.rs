//! Budgeted witness searches for the combinatorial largeness notions.
//!
//! A witness `(a, H)` certifies `a + Σ_{t∈H} f(t) ∈ A` for every `f` in a
//! finite family. Searches scan candidates in one fixed canonical order:
//! smaller `|a|` first, then smaller `a` (for vectors: smaller max-norm, then
//! lexicographic), then smaller `|H|`, then lexicographically smaller `H`.
//! An exhausted search says nothing about whether `A` is large; it only
//! reports that the budget held no witness.

use std::collections::BTreeSet;

use log::debug;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::sequences::{IndexSet, IntSeq, SeqFamily};
use crate::sets::{GroupPoint, PointJson, Region, ZSet, ZvSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Candidates `a` satisfy `|a| ≤ a_bound` (max-norm for vectors).
    pub a_bound: u64,
    /// `H ⊆ {1, ..., r}`.
    pub r: usize,
    /// Cap on `(a, H)` pairs examined.
    #[serde(default = "unlimited")]
    pub max_candidates: u64,
}

fn unlimited() -> u64 {
    u64::MAX
}

impl SearchBudget {
    pub fn new(a_bound: u64, r: usize) -> Self {
        SearchBudget { a_bound, r, max_candidates: u64::MAX }
    }

    pub fn with_max_candidates(mut self, max_candidates: u64) -> Self {
        self.max_candidates = max_candidates;
        self
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "P: GroupPoint")]
#[serde(try_from = "WitnessRepr", into = "WitnessRepr")]
pub struct Witness<P> {
    pub a: P,
    pub h: IndexSet,
}

#[derive(Serialize, Deserialize)]
struct WitnessRepr {
    a: PointJson,
    #[serde(rename = "H")]
    h: IndexSet,
}

impl<P: GroupPoint> TryFrom<WitnessRepr> for Witness<P> {
    type Error = String;

    fn try_from(r: WitnessRepr) -> std::result::Result<Self, String> {
        let a = P::decode(r.a).ok_or("witness point has the wrong shape")?;
        Ok(Witness { a, h: r.h })
    }
}

impl<P: GroupPoint> From<Witness<P>> for WitnessRepr {
    fn from(w: Witness<P>) -> Self {
        WitnessRepr { a: w.a.encode(), h: w.h }
    }
}

/// Result of a budgeted search: a witness, or the budget that ran dry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "P: GroupPoint")]
#[serde(try_from = "OutcomeRepr", into = "OutcomeRepr")]
pub struct OracleOutcome<P> {
    pub witness: Option<Witness<P>>,
    pub examined: u64,
    pub budget: SearchBudget,
}

#[derive(Serialize, Deserialize)]
struct OutcomeRepr {
    status: OutcomeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<PointJson>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<IndexSet>,
    examined: u64,
    budget: SearchBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeStatus {
    Found,
    Exhausted,
}

impl<P: GroupPoint> TryFrom<OutcomeRepr> for OracleOutcome<P> {
    type Error = String;

    fn try_from(r: OutcomeRepr) -> std::result::Result<Self, String> {
        let witness = match (r.status, r.a, r.h) {
            (OutcomeStatus::Found, Some(a), Some(h)) => Some(Witness {
                a: P::decode(a).ok_or("witness point has the wrong shape")?,
                h,
            }),
            (OutcomeStatus::Found, _, _) => return Err("found outcome without a and H".into()),
            (OutcomeStatus::Exhausted, _, _) => None,
        };
        Ok(OracleOutcome { witness, examined: r.examined, budget: r.budget })
    }
}

impl<P: GroupPoint> From<OracleOutcome<P>> for OutcomeRepr {
    fn from(o: OracleOutcome<P>) -> Self {
        let (status, a, h) = match o.witness {
            Some(w) => (OutcomeStatus::Found, Some(w.a.encode()), Some(w.h)),
            None => (OutcomeStatus::Exhausted, None, None),
        };
        OutcomeRepr { status, a, h, examined: o.examined, budget: o.budget }
    }
}

impl<P> OracleOutcome<P> {
    pub fn status(&self) -> OutcomeStatus {
        if self.witness.is_some() {
            OutcomeStatus::Found
        } else {
            OutcomeStatus::Exhausted
        }
    }

    pub fn is_found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Points that the search can enumerate in canonical order.
pub trait SearchPoint: GroupPoint {
    /// All points with norm at most `bound`, in canonical order.
    fn candidates(dim: usize, bound: u64) -> Box<dyn Iterator<Item = Self>>;
}

impl SearchPoint for BigInt {
    fn candidates(_dim: usize, bound: u64) -> Box<dyn Iterator<Item = Self>> {
        Box::new(std::iter::once(BigInt::from(0)).chain((1..=bound).flat_map(|n| {
            let n = BigInt::from(n);
            [-n.clone(), n]
        })))
    }
}

impl SearchPoint for Vec<BigInt> {
    fn candidates(dim: usize, bound: u64) -> Box<dyn Iterator<Item = Self>> {
        Box::new((0..=bound).flat_map(move |n| shell(dim, n as i64)))
    }
}

/// Points of `[-n, n]^dim` with max-norm exactly `n`, lexicographically.
fn shell(dim: usize, n: i64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut cur = vec![-n; dim];
    loop {
        if cur.iter().any(|x| x.abs() == n) || n == 0 {
            out.push(cur.iter().map(|&x| BigInt::from(x)).collect());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                break;
            }
            cur[i] = -n;
        }
    }
}

/// Nonempty subsets of `{1..r}` ordered by size, then lexicographically.
pub fn subsets_in_canonical_order(r: usize) -> impl Iterator<Item = IndexSet> {
    (1..=r).flat_map(move |size| Combinations::new(r, size))
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (1..=k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.current.as_mut()?;
        let out: IndexSet = cur.iter().copied().collect();
        let k = cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Core scan shared by every search. `columns[f][t - 1]` is `f(t)`.
fn search<R>(
    set: &R,
    columns: &[Vec<R::Point>],
    dim: usize,
    r: usize,
    budget: SearchBudget,
) -> OracleOutcome<R::Point>
where
    R: Region,
    R::Point: SearchPoint,
{
    // (H, Σ_{t∈H} f(t) for each f) in canonical H order; never more entries
    // than the candidate cap could reach.
    let cap = usize::try_from(budget.max_candidates).unwrap_or(usize::MAX);
    let sums: Vec<(IndexSet, Vec<R::Point>)> = subsets_in_canonical_order(r)
        .take(cap)
        .map(|h| {
            let s = columns
                .iter()
                .map(|col| {
                    h.iter()
                        .fold(R::Point::origin(dim), |acc, &t| acc.add(&col[t - 1]))
                })
                .collect();
            (h, s)
        })
        .collect();

    let mut examined = 0u64;
    for a in R::Point::candidates(dim, budget.a_bound) {
        for (h, s) in &sums {
            if examined >= budget.max_candidates {
                debug!("search stopped at the candidate cap {}", budget.max_candidates);
                return OracleOutcome { witness: None, examined, budget };
            }
            examined += 1;
            if s.iter().all(|sf| set.contains(&a.add(sf))) {
                return OracleOutcome {
                    witness: Some(Witness { a, h: h.clone() }),
                    examined,
                    budget,
                };
            }
        }
    }
    OracleOutcome { witness: None, examined, budget }
}

fn check_prefix(lengths: impl Iterator<Item = usize>, r: usize) -> Result<()> {
    if let Some(short) = lengths.filter(|&l| l < r).min() {
        return Err(Error::PrefixTooShort { required: BigInt::from(r), available: short });
    }
    Ok(())
}

/// Witness that `A` absorbs `F` with `H ⊆ {1..budget.r}`.
pub fn cr_witness(set: &ZSet, family: &[IntSeq], budget: &SearchBudget) -> Result<OracleOutcome<BigInt>> {
    if family.is_empty() {
        return Err(Error::ContractViolation("witness search over an empty family".into()));
    }
    check_prefix(family.iter().map(IntSeq::len), budget.r)?;
    let columns: Vec<Vec<BigInt>> = family.iter().map(|f| f.values().to_vec()).collect();
    Ok(search(set, &columns, 1, budget.r, *budget))
}

/// The ℤ^v form of [`cr_witness`]: `a` is a vector and `f` ranges over a
/// family of vector sequences.
pub fn cr_witness_in(set: &ZvSet, family: &SeqFamily, budget: &SearchBudget) -> Result<OracleOutcome<Vec<BigInt>>> {
    if let Some(d) = set.dim() {
        if d != family.dim() {
            return Err(Error::DimensionMismatch(format!(
                "set of dimension {d} against a family of dimension {}",
                family.dim()
            )));
        }
    }
    check_prefix(std::iter::once(family.len()), budget.r)?;
    let columns: Vec<Vec<Vec<BigInt>>> = family
        .members()
        .iter()
        .map(|f| (1..=f.len()).map(|t| f.at(t).expect("in range").to_vec()).collect())
        .collect();
    Ok(search(set, &columns, family.dim(), budget.r, *budget))
}

/// Matrix form: some `a` and nonempty `H ⊆ {1..rows}` with
/// `a + Σ_{t∈H} m_{t,j} ∈ A` for every column `j`. The matrix fixes `r`, so
/// `budget.r` is replaced by the row count (the echoed budget shows it).
pub fn cr_witness_matrix(set: &ZSet, matrix: &IntMatrix, budget: &SearchBudget) -> OracleOutcome<BigInt> {
    let columns: Vec<Vec<BigInt>> = (0..matrix.cols()).map(|j| matrix.column(j)).collect();
    let budget = budget.with_r(matrix.rows());
    search(set, &columns, 1, budget.r, budget)
}

/// The `r × k` matrix `m_{t,j} = f_j(t)`, `t ≤ r`.
pub fn family_matrix(family: &[IntSeq], r: usize) -> Result<IntMatrix> {
    check_prefix(family.iter().map(IntSeq::len), r)?;
    IntMatrix::from_rows(
        (1..=r)
            .map(|t| family.iter().map(|f| f.at(t).expect("checked").clone()).collect())
            .collect(),
    )
}

/// J-set search: `H` ranges over the whole prefix, still capped by `budget.r`.
pub fn jset_witness(set: &ZSet, family: &[IntSeq], budget: &SearchBudget) -> Result<OracleOutcome<BigInt>> {
    if family.is_empty() {
        return Err(Error::ContractViolation("witness search over an empty family".into()));
    }
    let len = family.iter().map(IntSeq::len).min().expect("nonempty");
    let r = len.min(budget.r);
    let columns: Vec<Vec<BigInt>> = family.iter().map(|f| f.values().to_vec()).collect();
    Ok(search(set, &columns, 1, r, *budget))
}

/// Re-checks a witness by direct evaluation, independent of [`search`].
pub fn verify_witness(set: &ZSet, family: &[IntSeq], witness: &Witness<BigInt>) -> bool {
    !witness.h.is_empty()
        && family.iter().all(|f| {
            f.block_sum(&witness.h)
                .is_ok_and(|s| set.contains(&(&witness.a + s)))
        })
}

pub fn verify_witness_in(set: &ZvSet, family: &SeqFamily, witness: &Witness<Vec<BigInt>>) -> bool {
    !witness.h.is_empty()
        && family.members().iter().all(|f| {
            f.block_sum(&witness.h).is_ok_and(|s| {
                let p: Vec<BigInt> = s.iter().zip(&witness.a).map(|(x, a)| x + a).collect();
                set.contains(&p)
            })
        })
}

/// Least `|x| ≤ x_bound` (ties to the negative side) with
/// `F_test + x ⊆ ∪_{t∈G} (-t + A)`.
pub fn ps_check(
    set: &ZSet,
    g: &BTreeSet<BigInt>,
    f_test: &BTreeSet<BigInt>,
    x_bound: u64,
) -> Result<Option<BigInt>> {
    if g.is_empty() || f_test.is_empty() {
        return Err(Error::ContractViolation("G and F must be nonempty".into()));
    }
    Ok(BigInt::candidates(1, x_bound).find(|x| {
        f_test
            .iter()
            .all(|f| g.iter().any(|t| set.contains(&(t + f + x))))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateBudget {
    pub a_bound: u64,
    pub max_candidates: u64,
    /// Enumerate every matrix when there are at most this many.
    pub exhaustive_cap: u64,
    /// Otherwise check this many seeded random matrices.
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Evidence {
    /// Every matrix over the alphabet was checked.
    Exhaustive { matrices: u64 },
    /// Random matrices only: no counterexample seen, which is not a proof.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RTrial {
    pub r: usize,
    pub evidence: Evidence,
    pub counterexample: Option<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct REstimate {
    pub r: Option<usize>,
    pub trials: Vec<RTrial>,
}

/// Least `r ≤ r_max` such that every `r × k` matrix over `alphabet` has a
/// witness within the budget.
pub fn estimate_r(
    set: &ZSet,
    k: usize,
    alphabet: &[BigInt],
    r_max: usize,
    budget: &EstimateBudget,
) -> Result<REstimate> {
    if k == 0 || alphabet.is_empty() {
        return Err(Error::ContractViolation("need k >= 1 and a nonempty alphabet".into()));
    }
    let search_budget = SearchBudget {
        a_bound: budget.a_bound,
        r: 1,
        max_candidates: budget.max_candidates,
    };
    let mut trials = Vec::new();
    for r in 1..=r_max {
        let cells = r * k;
        let total = u32::try_from(cells)
            .ok()
            .and_then(|c| (alphabet.len() as u64).checked_pow(c));
        let exhaustive = total.is_some_and(|t| t <= budget.exhaustive_cap);
        let counterexample = if exhaustive {
            all_matrices(alphabet, r, k).find(|m| !cr_witness_matrix(set, m, &search_budget).is_found())
        } else {
            if budget.samples == 0 {
                return Err(Error::BudgetExceeded(format!(
                    "{}^{cells} matrices exceed the exhaustive cap and sampling is disabled",
                    alphabet.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ r as u64);
            (0..budget.samples)
                .map(|_| {
                    IntMatrix::from_rows(
                        (0..r)
                            .map(|_| (0..k).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect())
                            .collect(),
                    )
                    .expect("r, k >= 1")
                })
                .find(|m| !cr_witness_matrix(set, m, &search_budget).is_found())
        };
        let evidence = if exhaustive {
            Evidence::Exhaustive { matrices: total.expect("exhaustive implies counted") }
        } else {
            Evidence::Sampled { samples: budget.samples, seed: budget.seed }
        };
        let done = counterexample.is_none();
        trials.push(RTrial { r, evidence, counterexample });
        if done {
            return Ok(REstimate { r: Some(r), trials });
        }
    }
    Ok(REstimate { r: None, trials })
}

fn all_matrices(alphabet: &[BigInt], r: usize, k: usize) -> impl Iterator<Item = IntMatrix> + '_ {
    let cells = r * k;
    let mut digits = Some(vec![0usize; cells]);
    std::iter::from_fn(move || {
        let cur = digits.as_mut()?;
        let m = IntMatrix::from_rows(
            cur.chunks(k)
                .map(|row| row.iter().map(|&i| alphabet[i].clone()).collect())
                .collect(),
        )
        .expect("r, k >= 1");
        let mut i = cells;
        loop {
            if i == 0 {
                digits = None;
                break;
            }
            i -= 1;
            if cur[i] + 1 < alphabet.len() {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
        Some(m)
    })
}
