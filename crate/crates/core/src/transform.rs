//! Transporting witnesses from `B ⊆ ℤ` to `C = {y ∈ ℤ^v : A y ∈ B^u}`.
//!
//! Given a family `F` of `m` vector sequences, the pipeline clears the
//! denominators of `A` (giving `d`), builds divisibility blocks `K_n` for all
//! `m·v` coordinate projections, and forms the integer sequences
//!
//! ```text
//! g_{f,i}(n) = Σ_j a_ij · Σ_{t∈K_n} f_j(t).
//! ```
//!
//! A witness `(a, G)` for `B` against the `g`s, together with an integer `x`
//! satisfying `A x = (a, ..., a)`, yields the witness `x + Σ_{t∈K} f(t)` for
//! `C` where `K = ∪_{n∈G} K_n`, because row `i` of `A` applied to it equals
//! `a + Σ_{n∈G} g_{f,i}(n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{block_width, build_blocks, verify_blocks, BlockFamily};
use crate::error::{Error, Result};
use crate::linalg::{as_integer, clear_denominators, solve_constant_image, RatMatrix};
use crate::numeric;
use crate::sequences::{projection_family, IndexSet, IntSeq, SeqFamily};
use crate::sets::{preimage_set, ZSet};
use crate::witness::{cr_witness, SearchBudget, Witness};

/// `g_{f,i}` for member `member` of the family and row `row` of `A`, both
/// 1-based. `distinct` indexes the deduplicated list handed to the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GFunction {
    pub member: usize,
    pub row: usize,
    pub distinct: usize,
    pub values: IntSeq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GTable {
    pub entries: Vec<GFunction>,
    pub distinct: Vec<IntSeq>,
}

impl GTable {
    pub fn get(&self, member: usize, row: usize) -> Option<&IntSeq> {
        self.entries
            .iter()
            .find(|g| g.member == member && g.row == row)
            .map(|g| &g.values)
    }
}

/// `Σ_j a_ij · Σ_{t∈block} f_j(t)` in exact rationals.
fn g_value(a: &RatMatrix, row: usize, sums: &[BigInt]) -> BigRational {
    a.row(row)
        .iter()
        .zip(sums)
        .map(|(aij, s)| aij * BigRational::from_integer(s.clone()))
        .sum()
}

/// Builds every `g_{f,i}` on `{1..N}` and deduplicates them in first-seen
/// order. A fractional value can only come from blocks that violate the
/// divisibility invariant and is reported as [`Error::InvariantBreach`].
pub fn build_g_functions(a: &RatMatrix, family: &SeqFamily, blocks: &BlockFamily) -> Result<GTable> {
    if family.dim() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "family of dimension {} against a matrix with {} columns",
            family.dim(),
            a.cols()
        )));
    }
    let mut entries = Vec::with_capacity(family.size() * a.rows());
    let mut distinct: Vec<IntSeq> = Vec::new();
    for (fi, f) in family.members().iter().enumerate() {
        let sums = blocks
            .blocks
            .iter()
            .map(|k| f.block_sum(k))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..a.rows() {
            let values = sums
                .iter()
                .enumerate()
                .map(|(n, s)| {
                    let v = g_value(a, i, s);
                    as_integer(&v).ok_or_else(|| {
                        Error::InvariantBreach(format!(
                            "g for member {}, row {}, block {} is {}",
                            fi + 1,
                            i + 1,
                            n + 1,
                            numeric::format_rational(&v)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let values = IntSeq::new(values)?;
            let idx = match distinct.iter().position(|g| *g == values) {
                Some(p) => p,
                None => {
                    distinct.push(values.clone());
                    distinct.len() - 1
                }
            };
            entries.push(GFunction { member: fi + 1, row: i + 1, distinct: idx, values });
        }
    }
    Ok(GTable { entries, distinct })
}

/// Everything the construction produced, enough to re-check it offline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformTrace {
    #[serde(rename = "A")]
    pub matrix: RatMatrix,
    #[serde(with = "numeric::int")]
    pub d: BigInt,
    pub m: usize,
    pub u: usize,
    pub v: usize,
    #[serde(with = "numeric::int")]
    pub k: BigInt,
    #[serde(rename = "N")]
    pub n_blocks: usize,
    pub blocks: BlockFamily,
    pub g_functions: GTable,
    pub oracle_witness: Witness<BigInt>,
    pub oracle_examined: u64,
    pub budget: SearchBudget,
    #[serde(with = "numeric::int_vec")]
    pub x: Vec<BigInt>,
    #[serde(rename = "K")]
    pub k_set: IndexSet,
    #[serde(with = "numeric::int_vec_vec")]
    pub outputs: Vec<Vec<BigInt>>,
    pub verified: bool,
}

/// What an exhausted oracle call leaves behind: the blocks and `g`s can be
/// reused with a larger budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustedTransform {
    #[serde(with = "numeric::int")]
    pub d: BigInt,
    #[serde(with = "numeric::int")]
    pub k: BigInt,
    pub blocks: BlockFamily,
    pub distinct_g: Vec<IntSeq>,
    pub examined: u64,
    pub budget: SearchBudget,
}

/// Runs the construction with `N` blocks. The oracle searches
/// `H ⊆ {1..N}`, so `budget.r` is replaced by `N`.
pub fn transform_witness(
    a: &RatMatrix,
    b: &ZSet,
    family: &SeqFamily,
    n_blocks: usize,
    budget: &SearchBudget,
) -> Result<TransformTrace> {
    if family.dim() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "family of dimension {} against a matrix with {} columns",
            family.dim(),
            a.cols()
        )));
    }
    if n_blocks == 0 {
        return Err(Error::ContractViolation("at least one block is needed".into()));
    }
    if solve_constant_image(a, &BigInt::from(1)).is_none() {
        return Err(Error::ConstantImageUnsolvable);
    }
    let (d, _) = clear_denominators(a);
    let (m, u, v) = (family.size(), a.rows(), a.cols());
    let projections = projection_family(family);
    let blocks = build_blocks(&projections, &d, n_blocks)?;
    let g = build_g_functions(a, family, &blocks)?;

    let budget = budget.with_r(n_blocks);
    let outcome = cr_witness(b, &g.distinct, &budget)?;
    let Some(witness) = outcome.witness else {
        return Err(Error::OracleExhausted(Box::new(ExhaustedTransform {
            d,
            k: blocks.k.clone(),
            blocks,
            distinct_g: g.distinct,
            examined: outcome.examined,
            budget,
        })));
    };

    let x = solve_constant_image(a, &witness.a).ok_or_else(|| {
        Error::InvariantBreach(format!("no integer x with A x = {} despite the a = 1 solution", witness.a))
    })?;
    let k_set = blocks.union_over(&witness.h)?;
    let outputs = family
        .members()
        .iter()
        .map(|f| {
            let s = f.block_sum(&k_set)?;
            Ok(x.iter().zip(&s).map(|(xi, si)| xi + si).collect())
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;

    let mut trace = TransformTrace {
        matrix: a.clone(),
        d,
        m,
        u,
        v,
        k: blocks.k.clone(),
        n_blocks,
        blocks,
        g_functions: g,
        oracle_witness: witness,
        oracle_examined: outcome.examined,
        budget,
        x,
        k_set,
        outputs,
        verified: false,
    };
    trace.verified = verify_transform(&trace, b, family);
    if !trace.verified {
        return Err(Error::InvariantBreach("transform trace failed its own verification".into()));
    }
    Ok(trace)
}

/// Re-checks a trace from scratch against `B` and `F`.
///
/// Both sides of the closing identity are recomputed independently: row `i`
/// of `A·(x + Σ_{t∈K} f(t))` straight from the sequences, and
/// `a + Σ_{n∈G} g_{f,i}(n)` from fresh block sums. They must agree, lie in
/// `B`, and match what the trace recorded. The blocks, `A x = (a, ..., a)`,
/// `K = ∪_{n∈G} K_n` and `K ⊆ {1..N·k}` are checked as well.
pub fn verify_transform(trace: &TransformTrace, b: &ZSet, family: &SeqFamily) -> bool {
    verify_inner(trace, b, family).unwrap_or(false)
}

fn verify_inner(trace: &TransformTrace, b: &ZSet, family: &SeqFamily) -> Option<bool> {
    let a = &trace.matrix;
    let (u, v, m) = (a.rows(), a.cols(), family.size());
    if (trace.u, trace.v, trace.m) != (u, v, m) || family.dim() != v {
        return Some(false);
    }
    let (d, _) = clear_denominators(a);
    if trace.d != d || trace.k != block_width(&d, m * v) || trace.blocks.k != trace.k {
        return Some(false);
    }
    if trace.blocks.blocks.len() != trace.n_blocks
        || !verify_blocks(&projection_family(family), &d, &trace.blocks)
    {
        return Some(false);
    }

    let w = &trace.oracle_witness;
    if w.h.is_empty() || w.h.iter().any(|&n| n == 0 || n > trace.n_blocks) {
        return Some(false);
    }
    let ax = a.mul_int_vec(&trace.x).ok()?;
    let a_rat = BigRational::from_integer(w.a.clone());
    if ax.iter().any(|e| *e != a_rat) {
        return Some(false);
    }

    let mut k_expected = IndexSet::new();
    for &n in &w.h {
        k_expected.extend(trace.blocks.block(n)?.iter().copied());
    }
    let bound = trace.n_blocks.checked_mul(trace.k.to_usize()?)?;
    if trace.k_set != k_expected || trace.k_set.last().is_some_and(|&t| t > bound) {
        return Some(false);
    }

    if trace.outputs.len() != m || trace.g_functions.entries.len() != m * u {
        return Some(false);
    }
    let c = preimage_set(a, b);
    for (fi, f) in family.members().iter().enumerate() {
        let s = f.block_sum(&trace.k_set).ok()?;
        let y: Vec<BigInt> = trace.x.iter().zip(&s).map(|(xi, si)| xi + si).collect();
        if trace.outputs[fi] != y || !c.contains(&y) {
            return Some(false);
        }
        let lhs = a.mul_int_vec(&y).ok()?;
        let block_sums = trace
            .blocks
            .blocks
            .iter()
            .map(|k| f.block_sum(k).ok())
            .collect::<Option<Vec<_>>>()?;
        for (i, lhs_i) in lhs.iter().enumerate() {
            let stored = trace.g_functions.get(fi + 1, i + 1)?;
            let mut rhs = a_rat.clone();
            for &n in &w.h {
                let g = g_value(a, i, &block_sums[n - 1]);
                if stored.at(n).map(|x| BigRational::from_integer(x.clone())) != Some(g.clone()) {
                    return Some(false);
                }
                rhs += g;
            }
            let Some(value) = as_integer(&rhs) else { return Some(false) };
            if *lhs_i != rhs || !b.contains(&value) {
                return Some(false);
            }
        }
    }
    let distinct_ok = trace.g_functions.entries.iter().all(|g| {
        trace.g_functions.distinct.get(g.distinct) == Some(&g.values)
    });
    Some(distinct_ok)
}

/// How the full run draws its families: per instance a fresh seed is taken
/// from a ChaCha8 stream seeded with `seed`, and entries are uniform in
/// `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyGenerator {
    pub seed: u64,
    pub instances: usize,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InstanceOutcome {
    Verified { trace: Box<TransformTrace> },
    Exhausted { examined: u64, distinct_g: usize },
    Failed { error: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullInstance {
    pub m: usize,
    pub seed: u64,
    pub family: SeqFamily,
    pub outcome: InstanceOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullSummary {
    pub instances: usize,
    pub verified: usize,
    pub exhausted: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub summary: FullSummary,
    pub instances: Vec<FullInstance>,
}

impl FullReport {
    /// No instance failed; exhausted budgets are tolerated.
    pub fn sound(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Runs [`transform_witness`] for `m = 1..=m_max`, `generator.instances`
/// families each, with prefixes just long enough for `N` blocks.
pub fn transform_cr_full(
    a: &RatMatrix,
    b: &ZSet,
    generator: &FamilyGenerator,
    m_max: usize,
    n_blocks: usize,
    budget: &SearchBudget,
) -> Result<FullReport> {
    if generator.lo > generator.hi {
        return Err(Error::config("lo", format!("empty range [{}, {}]", generator.lo, generator.hi)));
    }
    let (d, _) = clear_denominators(a);
    let v = a.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(generator.seed);
    let mut summary = FullSummary::default();
    let mut instances = Vec::new();
    for m in 1..=m_max {
        let k = block_width(&d, m * v);
        let len = k
            .to_usize()
            .and_then(|k| k.checked_mul(n_blocks))
            .ok_or_else(|| Error::BudgetExceeded(format!("prefix length {k}·{n_blocks} is not addressable")))?;
        for _ in 0..generator.instances {
            let seed: u64 = rng.gen();
            let family = SeqFamily::seeded_uniform(seed, m, v, len, generator.lo, generator.hi)?;
            let outcome = match transform_witness(a, b, &family, n_blocks, budget) {
                Ok(trace) => {
                    summary.verified += 1;
                    InstanceOutcome::Verified { trace: Box::new(trace) }
                }
                Err(Error::OracleExhausted(ex)) => {
                    summary.exhausted += 1;
                    InstanceOutcome::Exhausted { examined: ex.examined, distinct_g: ex.distinct_g.len() }
                }
                Err(e) => {
                    summary.failed += 1;
                    InstanceOutcome::Failed { error: e.to_string() }
                }
            };
            summary.instances += 1;
            instances.push(FullInstance { m, seed, family, outcome });
        }
    }
    Ok(FullReport { summary, instances })
}
