use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::{BlocksConfig, ChainConfig, PreimageConfig, SolveConfig, WitnessConfig, WitnessQuery};
use super::{Command, Report, RunOptions, Status};
use crate::blocks::{block_width, build_blocks, verify_blocks, BlockFamily};
use crate::chain::{
    chain_preimage, row_window, verify_chain_shift, ShiftIndex, WindowedChain,
};
use crate::error::{Error, Result};
use crate::linalg::{clear_denominators, has_constant_image_property, solve_constant_image, IntMatrix, RatMatrix};
use crate::numeric;
use crate::sequences::{projection_family, IntSeq, SeqFamily};
use crate::sets::{ZSet, ZvSet};
use crate::transform::{transform_cr_full, transform_witness, verify_transform, FamilyGenerator, InstanceOutcome, TransformTrace};
use crate::witness::{
    cr_witness, cr_witness_matrix, estimate_r, jset_witness, ps_check, verify_witness, OracleOutcome, REstimate,
};

fn to_len(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize()
        .ok_or_else(|| Error::BudgetExceeded(format!("{what} {x} is beyond addressable prefixes")))
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Verified
    } else {
        Status::Failed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksInstance {
    pub status: Status,
    /// The coordinate projections the blocks were built for.
    pub sequences: Vec<IntSeq>,
    pub blocks: BlockFamily,
}

fn check_blocks(inst: &mut BlocksInstance) {
    inst.status = status_of(verify_blocks(&inst.sequences, &inst.blocks.d, &inst.blocks));
}

pub fn cmd_blocks(cfg: &BlocksConfig, _opts: &RunOptions) -> Result<Report> {
    let m = cfg.family.size() * cfg.family.dim();
    let len = match cfg.len {
        Some(len) => len,
        None => to_len(&(block_width(&cfg.d, m) * BigInt::from(cfg.n)), "prefix length")?,
    };
    let family = cfg.family.build(len)?;
    let sequences = projection_family(&family);
    let blocks = build_blocks(&sequences, &cfg.d, cfg.n)?;
    let mut inst = BlocksInstance { status: Status::Failed, sequences, blocks };
    check_blocks(&mut inst);
    Report::new(Command::Blocks, cfg, [inst.status], &[inst])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveEntry {
    #[serde(with = "numeric::int")]
    pub a: BigInt,
    #[serde(with = "numeric::opt_int_vec")]
    pub x: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveInstance {
    pub status: Status,
    pub matrix: RatMatrix,
    #[serde(with = "numeric::int")]
    pub d: BigInt,
    pub scaled: IntMatrix,
    pub constant_image: bool,
    pub solutions: Vec<SolveEntry>,
}

fn check_solve(inst: &mut SolveInstance) {
    let (d, scaled) = clear_denominators(&inst.matrix);
    let property = has_constant_image_property(&inst.matrix);
    let solutions_ok = inst.solutions.iter().all(|s| match &s.x {
        Some(x) => inst.matrix.mul_int_vec(x).is_ok_and(|img| {
            img.iter().all(|e| *e == BigRational::from_integer(s.a.clone()))
        }),
        // linearity: with the property every constant is reachable
        None => !property,
    });
    inst.status = status_of(d == inst.d && scaled == inst.scaled && property == inst.constant_image && solutions_ok);
}

pub fn cmd_solve(cfg: &SolveConfig, _opts: &RunOptions) -> Result<Report> {
    let instances: Vec<SolveInstance> = cfg
        .matrices
        .iter()
        .map(|a| {
            let (d, scaled) = clear_denominators(a);
            let mut inst = SolveInstance {
                status: Status::Failed,
                matrix: a.clone(),
                d,
                scaled,
                constant_image: has_constant_image_property(a),
                solutions: cfg
                    .values
                    .iter()
                    .map(|v| SolveEntry { a: v.clone(), x: solve_constant_image(a, v) })
                    .collect(),
            };
            check_solve(&mut inst);
            inst
        })
        .collect();
    Report::new(Command::Solve, cfg, instances.iter().map(|i| i.status), &instances)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WitnessInstance {
    Cr {
        status: Status,
        set: ZSet,
        family: Vec<IntSeq>,
        outcome: OracleOutcome<BigInt>,
    },
    Matrix {
        status: Status,
        set: ZSet,
        matrix: IntMatrix,
        outcome: OracleOutcome<BigInt>,
    },
    Jset {
        status: Status,
        set: ZSet,
        family: Vec<IntSeq>,
        outcome: OracleOutcome<BigInt>,
    },
    Adapter {
        status: Status,
        set: ZSet,
        family: Vec<IntSeq>,
        sequence_form: OracleOutcome<BigInt>,
        matrix_form: OracleOutcome<BigInt>,
    },
    Ps {
        status: Status,
        set: ZSet,
        #[serde(rename = "G", with = "numeric::int_set")]
        g: BTreeSet<BigInt>,
        #[serde(rename = "F", with = "numeric::int_set")]
        f: BTreeSet<BigInt>,
        x_bound: u64,
        #[serde(with = "numeric::opt_int")]
        x: Option<BigInt>,
    },
    EstimateR {
        status: Status,
        set: ZSet,
        k: usize,
        estimate: REstimate,
    },
}

/// Found and re-verified, exhausted, or found but not re-verifiable.
fn outcome_status(set: &ZSet, family: &[IntSeq], outcome: &OracleOutcome<BigInt>) -> Status {
    match &outcome.witness {
        None => Status::Exhausted,
        Some(w) => status_of(
            w.h.iter().all(|&t| t >= 1 && t <= outcome.budget.r) && verify_witness(set, family, w),
        ),
    }
}

fn matrix_columns(m: &IntMatrix) -> Vec<IntSeq> {
    (0..m.cols())
        .map(|j| IntSeq::new(m.column(j)).expect("matrix has rows"))
        .collect()
}

fn check_witness(inst: &mut WitnessInstance) {
    match inst {
        WitnessInstance::Cr { status, set, family, outcome }
        | WitnessInstance::Jset { status, set, family, outcome } => {
            *status = outcome_status(set, family, outcome);
        }
        WitnessInstance::Matrix { status, set, matrix, outcome } => {
            *status = outcome_status(set, &matrix_columns(matrix), outcome);
        }
        WitnessInstance::Adapter { status, set, family, sequence_form, matrix_form } => {
            *status = if sequence_form != matrix_form {
                Status::Failed
            } else {
                outcome_status(set, family, sequence_form)
            };
        }
        WitnessInstance::Ps { status, set, g, f, x_bound, x } => {
            *status = match x {
                None => Status::Exhausted,
                Some(x) => status_of(
                    x.magnitude() <= &(*x_bound).into()
                        && f.iter().all(|p| g.iter().any(|t| set.contains(&(t + p + &*x)))),
                ),
            };
        }
        WitnessInstance::EstimateR { status, estimate, .. } => {
            *status = if estimate.r.is_some() { Status::Verified } else { Status::Exhausted };
        }
    }
}

fn scalar_family(spec: &super::config::FamilySpec, len: usize) -> Result<Vec<IntSeq>> {
    spec.build(len)?.scalar_members()
}

pub fn cmd_witness(cfg: &WitnessConfig, _opts: &RunOptions) -> Result<Report> {
    let mut instances = Vec::with_capacity(cfg.queries.len());
    for q in &cfg.queries {
        for s in query_sets(q) {
            s.validate()?;
        }
        let mut inst = match q {
            WitnessQuery::Cr { set, family, budget } => {
                let family = scalar_family(family, budget.r.max(1))?;
                let outcome = cr_witness(set, &family, budget)?;
                WitnessInstance::Cr { status: Status::Failed, set: set.clone(), family, outcome }
            }
            WitnessQuery::Matrix { set, matrix, budget } => WitnessInstance::Matrix {
                status: Status::Failed,
                set: set.clone(),
                matrix: matrix.clone(),
                outcome: cr_witness_matrix(set, matrix, budget),
            },
            WitnessQuery::Jset { set, family, budget, len } => {
                let family = scalar_family(family, *len)?;
                let outcome = jset_witness(set, &family, budget)?;
                WitnessInstance::Jset { status: Status::Failed, set: set.clone(), family, outcome }
            }
            WitnessQuery::Adapter { set, family, budget } => {
                let family = scalar_family(family, budget.r.max(1))?;
                let sequence_form = cr_witness(set, &family, budget)?;
                let matrix = crate::witness::family_matrix(&family, budget.r)?;
                let matrix_form = cr_witness_matrix(set, &matrix, budget);
                WitnessInstance::Adapter {
                    status: Status::Failed,
                    set: set.clone(),
                    family,
                    sequence_form,
                    matrix_form,
                }
            }
            WitnessQuery::Ps { set, g, f, x_bound } => WitnessInstance::Ps {
                status: Status::Failed,
                set: set.clone(),
                g: g.clone(),
                f: f.clone(),
                x_bound: *x_bound,
                x: ps_check(set, g, f, *x_bound)?,
            },
            WitnessQuery::EstimateR { set, k, alphabet, r_max, budget } => WitnessInstance::EstimateR {
                status: Status::Failed,
                set: set.clone(),
                k: *k,
                estimate: estimate_r(set, *k, alphabet, *r_max, budget)?,
            },
        };
        check_witness(&mut inst);
        instances.push(inst);
    }
    let statuses: Vec<Status> = instances.iter().map(witness_status).collect();
    Report::new(Command::Witness, cfg, statuses, &instances)
}

fn query_sets(q: &WitnessQuery) -> [&ZSet; 1] {
    match q {
        WitnessQuery::Cr { set, .. }
        | WitnessQuery::Matrix { set, .. }
        | WitnessQuery::Jset { set, .. }
        | WitnessQuery::Adapter { set, .. }
        | WitnessQuery::Ps { set, .. }
        | WitnessQuery::EstimateR { set, .. } => [set],
    }
}

fn witness_status(inst: &WitnessInstance) -> Status {
    match inst {
        WitnessInstance::Cr { status, .. }
        | WitnessInstance::Matrix { status, .. }
        | WitnessInstance::Jset { status, .. }
        | WitnessInstance::Adapter { status, .. }
        | WitnessInstance::Ps { status, .. }
        | WitnessInstance::EstimateR { status, .. } => *status,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageInstance {
    pub status: Status,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub family: SeqFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Box<TransformTrace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub examined: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn check_preimage(inst: &mut PreimageInstance, set: &ZSet) {
    if let Some(trace) = &inst.trace {
        inst.status = status_of(trace.verified && verify_transform(trace, set, &inst.family));
    }
}

pub fn cmd_preimage(cfg: &PreimageConfig, _opts: &RunOptions) -> Result<Report> {
    cfg.set.validate()?;
    let budget = cfg.budget.search_budget(cfg.n);
    let mut instances = Vec::new();
    if cfg.family.is_none() && cfg.full.is_none() {
        return Err(Error::config("family", "give a `family`, a `full` run, or both"));
    }
    if let Some(spec) = &cfg.family {
        let (d, _) = clear_denominators(&cfg.matrix);
        let k = block_width(&d, spec.size() * spec.dim());
        let len = to_len(&(k * BigInt::from(cfg.n)), "prefix length")?;
        let family = spec.build(len)?;
        let m = family.size();
        let mut inst = match transform_witness(&cfg.matrix, &cfg.set, &family, cfg.n, &budget) {
            Ok(trace) => PreimageInstance {
                status: Status::Failed,
                m,
                seed: None,
                family,
                trace: Some(Box::new(trace)),
                examined: None,
                error: None,
            },
            Err(Error::OracleExhausted(ex)) => PreimageInstance {
                status: Status::Exhausted,
                m,
                seed: None,
                family,
                trace: None,
                examined: Some(ex.examined),
                error: None,
            },
            Err(e) => PreimageInstance {
                status: Status::Failed,
                m,
                seed: None,
                family,
                trace: None,
                examined: None,
                error: Some(e.to_string()),
            },
        };
        check_preimage(&mut inst, &cfg.set);
        instances.push(inst);
    }
    if let Some(full) = &cfg.full {
        let generator = FamilyGenerator { seed: full.seed, instances: full.instances, lo: full.lo, hi: full.hi };
        let report = transform_cr_full(&cfg.matrix, &cfg.set, &generator, full.m_max, cfg.n, &budget)?;
        for fi in report.instances {
            let mut inst = PreimageInstance {
                status: Status::Failed,
                m: fi.m,
                seed: Some(fi.seed),
                family: fi.family,
                trace: None,
                examined: None,
                error: None,
            };
            match fi.outcome {
                InstanceOutcome::Verified { trace } => inst.trace = Some(trace),
                InstanceOutcome::Exhausted { examined, .. } => {
                    inst.status = Status::Exhausted;
                    inst.examined = Some(examined);
                }
                InstanceOutcome::Failed { error } => inst.error = Some(error),
            }
            check_preimage(&mut inst, &cfg.set);
            instances.push(inst);
        }
    }
    Report::new(Command::Preimage, cfg, instances.iter().map(|i| i.status), &instances)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainInstance {
    /// `D_{n+1} ⊆ D_n` on the box for every level.
    Structure { status: Status, levels: usize, decreasing: bool },
    Sample {
        status: Status,
        n: usize,
        #[serde(with = "numeric::int_vec")]
        y: Vec<BigInt>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<ShiftIndex>,
        /// Least `m` with `D_m ⊆ -y + D_n` on the box, by enumeration.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        brute_force_m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
    /// A witness search against `C_n`: evidence, never proof, that it is large.
    Evidence {
        status: Status,
        n: usize,
        family: Vec<IntSeq>,
        outcome: OracleOutcome<BigInt>,
    },
}

impl ChainInstance {
    fn status(&self) -> Status {
        match self {
            ChainInstance::Structure { status, .. }
            | ChainInstance::Sample { status, .. }
            | ChainInstance::Evidence { status, .. } => *status,
        }
    }
}

fn check_chain(inst: &mut ChainInstance, cfg: &ChainConfig, preimage: &WindowedChain<ZvSet>, opts: &RunOptions) -> Result<()> {
    match inst {
        ChainInstance::Structure { status, levels, decreasing } => {
            let again = preimage.is_decreasing();
            *status = status_of(*levels == preimage.chain().len() && again == *decreasing && again);
        }
        ChainInstance::Sample { status, n, y, shift: Some(shift), .. } => {
            let images = cfg.matrix.mul_int_vec(y)?;
            let images_ok = images.len() == shift.row_images.len()
                && images.iter().zip(&shift.row_images).all(|(a, b)| *a == BigRational::from_integer(b.clone()));
            let mut rows_ok = images_ok && shift.row_indices.len() == shift.row_images.len();
            for (i, (s, &m_i)) in shift.row_images.iter().zip(&shift.row_indices).enumerate() {
                if !rows_ok {
                    break;
                }
                let w = row_window(&cfg.matrix, i, &cfg.window);
                rows_ok = verify_chain_shift(&cfg.chain, *n, s, m_i, &w, opts.max_points)?;
            }
            let m_ok = shift.row_indices.iter().max() == Some(&shift.m);
            let window_ok = preimage.shift_holds(*n, y, shift.m)?;
            *status = status_of(rows_ok && m_ok && window_ok && shift.window_check);
        }
        ChainInstance::Sample { .. } => {}
        ChainInstance::Evidence { status, n, family, outcome } => {
            *status = outcome_status(cfg.chain.level(*n)?, family, outcome);
        }
    }
    Ok(())
}

pub fn cmd_chain(cfg: &ChainConfig, opts: &RunOptions) -> Result<Report> {
    for s in &cfg.chain.sets {
        s.validate()?;
    }
    if cfg.chain.is_empty() {
        return Err(Error::config("chain.sets", "a chain needs at least one set"));
    }
    if cfg.window.dim() != cfg.matrix.cols() {
        return Err(Error::config("window", "box dimension must match the matrix columns"));
    }
    if !has_constant_image_property(&cfg.matrix) {
        return Err(Error::config("matrix", "the matrix lacks the constant-image property"));
    }
    let levels = cfg.chain.len();
    let m_max = cfg.m_max.unwrap_or(levels);
    let preimage_chain = chain_preimage(&cfg.matrix, &cfg.chain);
    let preimage = WindowedChain::new(&preimage_chain, &cfg.window, opts.max_points)?;

    let mut instances = Vec::new();
    let decreasing = preimage.is_decreasing();
    instances.push(ChainInstance::Structure { status: status_of(decreasing), levels, decreasing });

    let pool: Vec<usize> = match &cfg.samples.levels {
        Some(l) => l.clone(),
        None => (1..=levels).collect(),
    };
    if let Some(&bad) = pool.iter().find(|&&n| n == 0 || n > levels) {
        return Err(Error::config("samples.levels", format!("level {bad} outside 1..={levels}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.samples.seed);
    for _ in 0..cfg.samples.count {
        if pool.is_empty() {
            break;
        }
        let n = pool[rng.gen_range(0..pool.len())];
        let pts = preimage.members(n)?;
        if pts.is_empty() {
            instances.push(ChainInstance::Sample {
                status: Status::Failed,
                n,
                y: vec![BigInt::zero(); cfg.matrix.cols()],
                shift: None,
                brute_force_m: None,
                error: Some(format!("level {n} has no members in the box")),
            });
            continue;
        }
        let y = pts[rng.gen_range(0..pts.len())].clone();
        let brute_force_m = preimage.least_shift(n, &y, m_max)?;
        let mut inst = match preimage.find_shift_index(&cfg.matrix, &cfg.chain, n, &y, &cfg.window, m_max, opts.max_points) {
            Ok(shift) => ChainInstance::Sample {
                status: Status::Failed,
                n,
                y,
                shift: Some(shift),
                brute_force_m,
                error: None,
            },
            Err(Error::Exhausted(msg)) => ChainInstance::Sample {
                status: Status::Exhausted,
                n,
                y,
                shift: None,
                brute_force_m,
                error: Some(msg),
            },
            Err(e) => return Err(e),
        };
        check_chain(&mut inst, cfg, &preimage, opts)?;
        instances.push(inst);
    }

    if let Some(ev) = &cfg.evidence {
        let family = scalar_family(&ev.family, ev.budget.r.max(1))?;
        for (i, c) in cfg.chain.sets.iter().enumerate() {
            let outcome = cr_witness(c, &family, &ev.budget)?;
            let status = outcome_status(c, &family, &outcome);
            instances.push(ChainInstance::Evidence { status, n: i + 1, family: family.clone(), outcome });
        }
    }
    Report::new(Command::Chain, cfg, instances.iter().map(ChainInstance::status), &instances)
}

fn typed<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    Ok(serde_json::from_value(v.clone())?)
}

fn typed_all<T: DeserializeOwned>(report: &Report) -> Result<Vec<T>> {
    report.instances.iter().map(typed).collect()
}

/// Re-checks every claim of a report without repeating any search.
pub(super) fn verify_report(report: &Report, opts: &RunOptions) -> Result<Report> {
    let mut out = match report.command {
        Command::Blocks => {
            let cfg: BlocksConfig = typed(&report.config)?;
            let mut insts: Vec<BlocksInstance> = typed_all(report)?;
            insts.iter_mut().for_each(check_blocks);
            Report::new(Command::Blocks, &cfg, insts.iter().map(|i| i.status), &insts)?
        }
        Command::Solve => {
            let cfg: SolveConfig = typed(&report.config)?;
            let mut insts: Vec<SolveInstance> = typed_all(report)?;
            insts.iter_mut().for_each(check_solve);
            Report::new(Command::Solve, &cfg, insts.iter().map(|i| i.status), &insts)?
        }
        Command::Witness => {
            let cfg: WitnessConfig = typed(&report.config)?;
            let mut insts: Vec<WitnessInstance> = typed_all(report)?;
            insts.iter_mut().for_each(check_witness);
            Report::new(Command::Witness, &cfg, insts.iter().map(witness_status), &insts)?
        }
        Command::Preimage => {
            let cfg: PreimageConfig = typed(&report.config)?;
            let mut insts: Vec<PreimageInstance> = typed_all(report)?;
            for inst in &mut insts {
                check_preimage(inst, &cfg.set);
            }
            Report::new(Command::Preimage, &cfg, insts.iter().map(|i| i.status), &insts)?
        }
        Command::Chain => {
            let cfg: ChainConfig = typed(&report.config)?;
            let preimage_chain = chain_preimage(&cfg.matrix, &cfg.chain);
            let preimage = WindowedChain::new(&preimage_chain, &cfg.window, opts.max_points)?;
            let mut insts: Vec<ChainInstance> = typed_all(report)?;
            for inst in &mut insts {
                check_chain(inst, &cfg, &preimage, opts)?;
            }
            Report::new(Command::Chain, &cfg, insts.iter().map(ChainInstance::status), &insts)?
        }
    };
    out.verify_only = true;
    Ok(out)
}
