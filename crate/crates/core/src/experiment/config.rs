//! JSON experiment configs.
//!
//! Integers may be written as JSON numbers or decimal strings. Parse errors
//! name the offending field path together with the line and column.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain::CrChain;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::numeric;
use crate::sequences::{make_vec_sequence, SeqFamily, SeqGenerator};
use crate::sets::{BoxWindow, ZSet};
use crate::witness::{EstimateBudget, SearchBudget};

/// Parses `text` as a config of type `T`.
pub fn parse_config<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::config(
            path,
            format!("{inner}"),
        )
    })
}

pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Configs whose random elements can all be reseeded at once.
pub trait Reseed {
    fn reseed(&mut self, seed: u64);
}

/// A family of vector sequences, either spelled out or drawn at random.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// One entry per member; each member lists one generator per coordinate.
    Explicit { members: Vec<Vec<SeqGenerator>> },
    SeededUniform {
        seed: u64,
        m: usize,
        dim: usize,
        lo: i64,
        hi: i64,
    },
}

impl FamilySpec {
    pub fn build(&self, len: usize) -> Result<SeqFamily> {
        match self {
            FamilySpec::Explicit { members } => {
                if members.is_empty() {
                    return Err(Error::config("family.members", "a family needs at least one member"));
                }
                SeqFamily::new(
                    members
                        .iter()
                        .map(|coords| make_vec_sequence(coords, len))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            FamilySpec::SeededUniform { seed, m, dim, lo, hi } => {
                SeqFamily::seeded_uniform(*seed, *m, *dim, len, *lo, *hi)
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FamilySpec::Explicit { members } => members.len(),
            FamilySpec::SeededUniform { m, .. } => *m,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::Explicit { members } => members.first().map_or(0, Vec::len),
            FamilySpec::SeededUniform { dim, .. } => *dim,
        }
    }
}

impl Reseed for FamilySpec {
    fn reseed(&mut self, new_seed: u64) {
        match self {
            FamilySpec::Explicit { members } => {
                for g in members.iter_mut().flatten() {
                    g.set_seed(new_seed);
                }
            }
            FamilySpec::SeededUniform { seed, .. } => *seed = new_seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksConfig {
    #[serde(with = "numeric::int")]
    pub d: BigInt,
    #[serde(rename = "N")]
    pub n: usize,
    pub family: FamilySpec,
    /// Prefix length; defaults to exactly `N·k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
}

impl Reseed for BlocksConfig {
    fn reseed(&mut self, seed: u64) {
        self.family.reseed(seed);
    }
}

fn one() -> Vec<BigInt> {
    vec![BigInt::from(1)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub matrices: Vec<RatMatrix>,
    /// Right-hand constants `a` to solve `A x = (a, ..., a)` for.
    #[serde(default = "one", with = "numeric::int_vec")]
    pub values: Vec<BigInt>,
}

impl Reseed for SolveConfig {
    fn reseed(&mut self, _seed: u64) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessQuery {
    /// Sequence form, `H ⊆ {1..r}`.
    Cr { set: ZSet, family: FamilySpec, budget: SearchBudget },
    /// Matrix form; `r` is the row count.
    Matrix { set: ZSet, matrix: IntMatrix, budget: SearchBudget },
    /// `H` anywhere in a prefix of length `len`, capped by `budget.r`.
    Jset {
        set: ZSet,
        family: FamilySpec,
        budget: SearchBudget,
        len: usize,
    },
    /// Sequence form and matrix form side by side.
    Adapter { set: ZSet, family: FamilySpec, budget: SearchBudget },
    Ps {
        set: ZSet,
        #[serde(rename = "G", with = "numeric::int_set")]
        g: BTreeSet<BigInt>,
        #[serde(rename = "F", with = "numeric::int_set")]
        f: BTreeSet<BigInt>,
        x_bound: u64,
    },
    EstimateR {
        set: ZSet,
        k: usize,
        #[serde(with = "numeric::int_vec")]
        alphabet: Vec<BigInt>,
        r_max: usize,
        budget: EstimateBudget,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessConfig {
    pub queries: Vec<WitnessQuery>,
}

impl Reseed for WitnessConfig {
    fn reseed(&mut self, seed: u64) {
        for q in &mut self.queries {
            match q {
                WitnessQuery::Cr { family, .. }
                | WitnessQuery::Jset { family, .. }
                | WitnessQuery::Adapter { family, .. } => family.reseed(seed),
                WitnessQuery::EstimateR { budget, .. } => budget.seed = seed,
                WitnessQuery::Matrix { .. } | WitnessQuery::Ps { .. } => {}
            }
        }
    }
}

/// Oracle budget for the transform; `r` is always the block count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBudget {
    pub a_bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_candidates: Option<u64>,
}

impl OracleBudget {
    pub fn search_budget(&self, n_blocks: usize) -> SearchBudget {
        let b = SearchBudget::new(self.a_bound, n_blocks);
        match self.max_candidates {
            Some(c) => b.with_max_candidates(c),
            None => b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullRun {
    pub seed: u64,
    pub instances: usize,
    pub lo: i64,
    pub hi: i64,
    pub m_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreimageConfig {
    pub matrix: RatMatrix,
    pub set: ZSet,
    #[serde(rename = "N")]
    pub n: usize,
    pub budget: OracleBudget,
    /// A single family; its prefix length is `N·k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Seeded families for every `m ≤ m_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<FullRun>,
}

impl Reseed for PreimageConfig {
    fn reseed(&mut self, seed: u64) {
        if let Some(f) = &mut self.family {
            f.reseed(seed);
        }
        if let Some(full) = &mut self.full {
            full.seed = seed;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSamples {
    pub seed: u64,
    pub count: usize,
    /// Levels to sample from; all levels when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<usize>>,
}

/// Witness searches run against each level as evidence that it is large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelEvidence {
    pub family: FamilySpec,
    pub budget: SearchBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub matrix: RatMatrix,
    pub chain: CrChain<ZSet>,
    pub window: BoxWindow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    pub samples: ChainSamples,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<LevelEvidence>,
}

impl Reseed for ChainConfig {
    fn reseed(&mut self, seed: u64) {
        self.samples.seed = seed;
        if let Some(e) = &mut self.evidence {
            e.family.reseed(seed);
        }
    }
}
