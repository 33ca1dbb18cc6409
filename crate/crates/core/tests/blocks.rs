mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use cr_preimage::blocks::{block_width, build_blocks, find_block_in_window, is_residue_constant, verify_blocks};
use cr_preimage::sequences::{IntSeq, VecSeq};

use common::big;

#[test]
fn every_ternary_window_has_a_block() {
    let d = big(3);
    let k = 7;
    assert_eq!(block_width(&d, 1), big(k));
    for pattern in 0..3u32.pow(k as u32) {
        let values: Vec<i64> = (0..k).map(|t| i64::from(pattern / 3u32.pow(t as u32) % 3)).collect();
        let f = IntSeq::from_i64(&values);
        let block = find_block_in_window(std::slice::from_ref(&f), &d, 1).unwrap();
        assert_eq!(block.len(), 3);
        assert!(is_residue_constant(std::slice::from_ref(&f), &d, &block));
        assert!(f.block_sum(&block).unwrap().is_multiple_of(&d));
    }
}

#[test]
fn width_formula() {
    for d in 1..=5i64 {
        for m in 0..=4u32 {
            assert_eq!(block_width(&big(d), m as usize), big(d.pow(m) * (d - 1) + 1));
        }
    }
}

fn family(values: &[Vec<i64>]) -> Vec<IntSeq> {
    values.iter().map(|v| IntSeq::from_i64(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blocks_depend_only_on_residues(
        d in 2i64..=4,
        m in 1usize..=2,
        seed in prop::collection::vec(-500i64..=500, 2 * 3 * 49),
        shift in prop::collection::vec(-50i64..=50, 2 * 3 * 49),
    ) {
        let k = (d.pow(m as u32) * (d - 1) + 1) as usize;
        let len = 3 * k;
        let base: Vec<Vec<i64>> = (0..m).map(|i| seed[i * len..(i + 1) * len].to_vec()).collect();
        let moved: Vec<Vec<i64>> = base
            .iter()
            .enumerate()
            .map(|(i, f)| f.iter().enumerate().map(|(t, x)| x + d * shift[i * len + t]).collect())
            .collect();
        let a = build_blocks(&family(&base), &big(d), 3).unwrap();
        let b = build_blocks(&family(&moved), &big(d), 3).unwrap();
        prop_assert!(verify_blocks(&family(&base), &big(d), &a));
        prop_assert!(verify_blocks(&family(&moved), &big(d), &b));
        prop_assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn block_sums_are_additive(values in prop::collection::vec(-100i64..=100, 12), mask in 0u16..4096, other in 0u16..4096) {
        let f = IntSeq::from_i64(&values);
        let k1: BTreeSet<usize> = (1..=12).filter(|t| mask & (1 << (t - 1)) != 0).collect();
        let k2: BTreeSet<usize> = (1..=12).filter(|t| other & !mask & (1 << (t - 1)) != 0).collect();
        let union: BTreeSet<usize> = k1.union(&k2).copied().collect();
        let sum: BigInt = f.block_sum(&k1).unwrap() + f.block_sum(&k2).unwrap();
        prop_assert_eq!(f.block_sum(&union).unwrap(), sum);
    }

    #[test]
    fn projection_commutes_with_block_sums(values in prop::collection::vec(-100i64..=100, 30), mask in 0u16..1024) {
        let rows: Vec<Vec<BigInt>> = values.chunks(3).map(|c| c.iter().map(|&x| big(x)).collect()).collect();
        let f = VecSeq::new(3, rows).unwrap();
        let k: BTreeSet<usize> = (1..=10).filter(|t| mask & (1 << (t - 1)) != 0).collect();
        let whole = f.block_sum(&k).unwrap();
        for i in 1..=3 {
            prop_assert_eq!(&f.project(i).unwrap().block_sum(&k).unwrap(), &whole[i - 1]);
        }
    }
}
