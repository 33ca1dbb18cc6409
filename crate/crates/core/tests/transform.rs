mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use cr_preimage::blocks::block_width;
use cr_preimage::linalg::{has_constant_image_property, RatMatrix};
use cr_preimage::sequences::SeqFamily;
use cr_preimage::sets::ZSet;
use cr_preimage::transform::{transform_witness, verify_transform};
use cr_preimage::witness::{cr_witness, SearchBudget};
use cr_preimage::Error;

use common::{big, rat};

fn lcm_of_denominators(a: &RatMatrix) -> BigInt {
    a.entries().fold(big(1), |acc, x| acc.lcm(x.denom()))
}

#[test]
fn identity_matrix_collapses_to_the_oracle() {
    let a = RatMatrix::from_i64(&[&[1]]);
    let b = ZSet::congruence(4, 1);
    for seed in 0..20u64 {
        let family = SeqFamily::seeded_uniform(seed, 2, 1, 6, -30, 30).unwrap();
        let budget = SearchBudget::new(50, 6);
        let direct = cr_witness(&b, &family.scalar_members().unwrap(), &budget).unwrap();
        match transform_witness(&a, &b, &family, 6, &budget) {
            Ok(trace) => {
                assert_eq!(trace.k, big(1));
                assert!(trace.blocks.blocks.iter().enumerate().all(|(i, k)| *k == BTreeSet::from([i + 1])));
                let w = direct.witness.expect("transform succeeded, so the oracle does");
                assert_eq!(trace.oracle_witness, w);
                assert_eq!(trace.x, vec![w.a.clone()]);
                assert_eq!(trace.k_set, w.h);
            }
            Err(Error::OracleExhausted(_)) => assert!(direct.witness.is_none()),
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

#[test]
fn tampered_outputs_fail_verification() {
    let a = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
    let b = ZSet::multiples(3);
    let family = SeqFamily::seeded_uniform(11, 1, 2, 16, -9, 9).unwrap();
    let mut trace = transform_witness(&a, &b, &family, 4, &SearchBudget::new(100, 4)).unwrap();
    assert!(verify_transform(&trace, &b, &family));
    trace.outputs[0][0] += 3;
    assert!(!verify_transform(&trace, &b, &family));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_matrices_keep_g_integral(
        nums in prop::collection::vec(-3i64..=3, 4),
        dens in prop::collection::vec(1i64..=6, 4),
        rows in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let entries: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| vec![BigRational::from_integer(big(1)), rat(nums[2 * i], dens[2 * i])])
            .collect();
        let a = RatMatrix::from_rows(entries).unwrap();
        prop_assume!(has_constant_image_property(&a));
        let d = lcm_of_denominators(&a);
        let n_blocks = 3;
        let k = block_width(&d, 2).to_usize().unwrap();
        let family = SeqFamily::seeded_uniform(seed, 1, 2, k * n_blocks, -50, 50).unwrap();
        let b = ZSet::multiples(2);
        match transform_witness(&a, &b, &family, n_blocks, &SearchBudget::new(200, n_blocks)) {
            Ok(trace) => {
                prop_assert!(trace.verified);
                prop_assert!(verify_transform(&trace, &b, &family));
                prop_assert!(trace.k_set.iter().all(|&t| t >= 1 && t <= n_blocks * k));
                for g in &trace.g_functions.distinct {
                    prop_assert_eq!(g.len(), n_blocks);
                }
            }
            Err(Error::OracleExhausted(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error: {}", e),
        }
    }

    #[test]
    fn identity_chain_on_integral_matrices(seed in any::<u64>(), m in 1usize..=2) {
        let a = RatMatrix::from_i64(&[&[1, 2], &[1, -1], &[1, 0]]);
        let b = ZSet::congruence(3, 1);
        let family = SeqFamily::seeded_uniform(seed, m, 2, 6, -20, 20).unwrap();
        if let Ok(trace) = transform_witness(&a, &b, &family, 6, &SearchBudget::new(100, 6)) {
            for (f, out) in family.members().iter().zip(&trace.outputs) {
                let image = a.mul_int_vec(out).unwrap();
                let mut lhs = trace.oracle_witness.a.clone();
                for &n in &trace.oracle_witness.h {
                    let s = f.block_sum(&trace.blocks.blocks[n - 1]).unwrap();
                    lhs += &s[0];
                }
                prop_assert_eq!(&image[2], &BigRational::from_integer(lhs));
                for e in &image {
                    prop_assert!(e.is_integer() && b.contains(&e.to_integer()));
                }
            }
        }
    }
}
