//! Divisibility blocks by iterated pigeonhole refinement.
//!
//! For a finite family `F` of integer sequences and a modulus `d`, the
//! window `{(n-1)k+1, ..., nk}` with `k = d^|F|·(d-1) + 1` always contains a
//! `d`-element set `K_n` on which every member of `F` is constant modulo `d`,
//! so every block sum is divisible by `d`.

use std::collections::BTreeMap;

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::sequences::{IndexSet, IntSeq};

/// `d^m·(d-1) + 1`, exactly.
pub fn block_width(d: &BigInt, m: usize) -> BigInt {
    num_traits::pow(d.clone(), m) * (d - BigInt::one()) + BigInt::one()
}

fn to_index(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize()
        .ok_or_else(|| Error::BudgetExceeded(format!("{what} {x} is beyond addressable prefixes")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFamily {
    #[serde(with = "numeric::int")]
    pub d: BigInt,
    /// Size of the family the blocks were built from.
    pub m: usize,
    #[serde(with = "numeric::int")]
    pub k: BigInt,
    /// `blocks[n - 1]` is `K_n`.
    pub blocks: Vec<IndexSet>,
}

impl BlockFamily {
    /// `K_n` for 1-based `n`.
    pub fn block(&self, n: usize) -> Option<&IndexSet> {
        n.checked_sub(1).and_then(|i| self.blocks.get(i))
    }

    /// `∪_{n∈G} K_n`.
    pub fn union_over(&self, g: &IndexSet) -> Result<IndexSet> {
        let mut out = IndexSet::new();
        for &n in g {
            let block = self.block(n).ok_or_else(|| {
                Error::ContractViolation(format!(
                    "block index {n} outside 1..={}",
                    self.blocks.len()
                ))
            })?;
            out.extend(block.iter().copied());
        }
        Ok(out)
    }
}

fn validate_modulus(d: &BigInt) -> Result<()> {
    if *d < BigInt::one() {
        return Err(Error::ContractViolation(format!("modulus must be positive, got {d}")));
    }
    Ok(())
}

/// Find `K ⊆ {lo, ..., lo + k - 1}` with `|K| = d` on which each sequence is
/// constant modulo `d`.
///
/// `H_0` is the window. Pass `i` colors `H_{i-1}` by `f_i(t) mod d`, keeps the
/// largest color class (ties go to the smaller residue) and truncates it to
/// its first `d^(m-i)·(d-1) + 1` indices. The result is the first `d`
/// elements of `H_m`, which has exactly that many.
pub fn find_block_in_window(family: &[IntSeq], d: &BigInt, lo: usize) -> Result<IndexSet> {
    validate_modulus(d)?;
    if family.is_empty() {
        return Err(Error::ContractViolation("block search over an empty family".into()));
    }
    if lo == 0 {
        return Err(Error::ContractViolation("windows start at index 1 or later".into()));
    }
    let m = family.len();
    let k = to_index(&block_width(d, m), "block width")?;
    if d.is_one() {
        return Ok(IndexSet::from([lo]));
    }
    let hi = lo + k - 1;
    if let Some(short) = family.iter().map(IntSeq::len).filter(|&l| l < hi).min() {
        return Err(Error::PrefixTooShort {
            required: BigInt::from(hi),
            available: short,
        });
    }

    let mut current: Vec<usize> = (lo..=hi).collect();
    for (i, f) in family.iter().enumerate() {
        let target = to_index(&block_width(d, m - i - 1), "class size")?;
        let mut classes: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
        for &t in &current {
            let r = f.at(t).expect("prefix checked").mod_floor(d);
            classes.entry(r).or_default().push(t);
        }
        let mut best: Option<&Vec<usize>> = None;
        for class in classes.values() {
            if best.is_none_or(|b| class.len() > b.len()) {
                best = Some(class);
            }
        }
        let best = best.expect("window is nonempty");
        if best.len() < target {
            return Err(Error::InvariantBreach(format!(
                "largest residue class has {} elements, pigeonhole promises {target}",
                best.len()
            )));
        }
        current = best[..target].to_vec();
    }
    let d_usize = to_index(d, "modulus")?;
    Ok(current.into_iter().take(d_usize).collect())
}

/// Blocks `K_1, ..., K_N`, block `n` taken from window `{(n-1)k+1, ..., nk}`.
pub fn build_blocks(family: &[IntSeq], d: &BigInt, count: usize) -> Result<BlockFamily> {
    validate_modulus(d)?;
    if family.is_empty() {
        return Err(Error::ContractViolation("block search over an empty family".into()));
    }
    let k_big = block_width(d, family.len());
    let required = &k_big * BigInt::from(count);
    if let Some(short) = family
        .iter()
        .map(IntSeq::len)
        .filter(|&l| BigInt::from(l) < required)
        .min()
    {
        return Err(Error::PrefixTooShort {
            required,
            available: short,
        });
    }
    let k = to_index(&k_big, "block width")?;
    let blocks = (0..count)
        .map(|n| find_block_in_window(family, d, n * k + 1))
        .collect::<Result<Vec<_>>>()?;
    debug!("built {count} blocks of width {k} for d = {d}");
    Ok(BlockFamily {
        d: d.clone(),
        m: family.len(),
        k: k_big,
        blocks,
    })
}

/// Whether each sequence takes a single residue class modulo `d` on `k`.
pub fn is_residue_constant(family: &[IntSeq], d: &BigInt, k: &IndexSet) -> bool {
    family.iter().all(|f| {
        let mut residues = k.iter().map(|&t| f.at(t).map(|x| x.mod_floor(d)));
        match residues.next() {
            None => true,
            Some(first) => first.is_some() && residues.all(|r| r == first),
        }
    })
}

/// Re-checks every block-family invariant against `family` and `d`.
pub fn verify_blocks(family: &[IntSeq], d: &BigInt, bf: &BlockFamily) -> bool {
    if *d < BigInt::one() || bf.d != *d || bf.m != family.len() || family.is_empty() {
        return false;
    }
    if bf.k != block_width(d, bf.m) {
        return false;
    }
    let Some(k) = bf.k.to_usize() else { return false };
    let Some(d_usize) = d.to_usize() else { return false };
    let mut prev_max = 0usize;
    for (idx, block) in bf.blocks.iter().enumerate() {
        let (lo, hi) = (idx * k + 1, (idx + 1) * k);
        let (Some(&first), Some(&last)) = (block.first(), block.last()) else {
            return false;
        };
        if block.len() != d_usize || first < lo || last > hi || first <= prev_max {
            return false;
        }
        prev_max = last;
        for f in family {
            match f.block_sum(block) {
                Ok(sum) if sum.mod_floor(d).is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}
