mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use cr_preimage::linalg::{
    clear_denominators, has_constant_image_property, smith_normal_form, solve_constant_image,
    solve_linear_diophantine, IntMatrix, RatMatrix,
};

use common::{big, constant_image_oracle, det, integer_solvable, mat_mul, rat};

fn int_matrix(rows: usize, cols: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(range, cols), rows)
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect()
}

fn build(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(to_big(m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_invariants((rows, cols) in (1usize..=4, 1usize..=4), seed in any::<u64>()) {
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|i| (0..cols).map(|j| ((seed >> ((i * 4 + j) % 60)) as i64 % 13) - 6).collect())
            .collect();
        let mat = build(&m);
        let snf = smith_normal_form(&mat);
        prop_assert!(snf.check(&mat));
        let (u, s, v) = (snf.u.to_rows(), snf.s.to_rows(), snf.v.to_rows());
        prop_assert_eq!(mat_mul(&mat_mul(&u, &to_big(&m)), &v), s.clone());
        prop_assert!(det(&u).abs().is_one());
        prop_assert!(det(&v).abs().is_one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn solver_matches_minor_criterion(m in int_matrix(2, 3, -6..=6), b in prop::collection::vec(-12i64..=12, 2)) {
        let rhs: Vec<BigInt> = b.iter().map(|&x| big(x)).collect();
        let solved = solve_linear_diophantine(&build(&m), &rhs).unwrap();
        prop_assert_eq!(solved.is_some(), integer_solvable(&to_big(&m), &rhs));
        if let Some(x) = solved {
            for (row, bi) in m.iter().zip(&b) {
                prop_assert_eq!(row.iter().zip(&x).map(|(a, xi)| big(*a) * xi).sum::<BigInt>(), big(*bi));
            }
        }
    }

    #[test]
    fn solver_finds_whatever_a_box_search_finds(m in int_matrix(2, 2, -5..=5), b in prop::collection::vec(-10i64..=10, 2)) {
        let brute = (-30i64..=30).any(|x| (-30i64..=30).any(|y| {
            m[0][0] * x + m[0][1] * y == b[0] && m[1][0] * x + m[1][1] * y == b[1]
        }));
        let rhs: Vec<BigInt> = b.iter().map(|&x| big(x)).collect();
        let solved = solve_linear_diophantine(&build(&m), &rhs).unwrap();
        if brute {
            prop_assert!(solved.is_some());
        }
    }

    #[test]
    fn constant_image_matches_oracle(
        nums in prop::collection::vec(-5i64..=5, 6),
        dens in prop::collection::vec(1i64..=6, 6),
        (u, v) in (1usize..=3, 1usize..=2),
    ) {
        let rows: Vec<Vec<BigRational>> = (0..u).map(|i| (0..v).map(|j| rat(nums[i * 2 + j], dens[i * 2 + j])).collect()).collect();
        let a = RatMatrix::from_rows(rows.clone()).unwrap();
        let property = has_constant_image_property(&a);
        prop_assert_eq!(property, constant_image_oracle(&rows));
        if property {
            let x = solve_constant_image(&a, &big(5)).unwrap();
            for e in a.mul_int_vec(&x).unwrap() {
                prop_assert_eq!(e, BigRational::from_integer(big(5)));
            }
        }
    }

    #[test]
    fn clearing_denominators_scales_exactly(nums in prop::collection::vec(-9i64..=9, 4), dens in prop::collection::vec(1i64..=6, 4)) {
        let rows: Vec<Vec<BigRational>> = (0..2).map(|i| (0..2).map(|j| rat(nums[i * 2 + j], dens[i * 2 + j])).collect()).collect();
        let a = RatMatrix::from_rows(rows.clone()).unwrap();
        let (d, m) = clear_denominators(&a);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(BigRational::from_integer(m.row(i)[j].clone()), x * BigRational::from_integer(d.clone()));
                prop_assert!((&d % x.denom()).is_zero());
            }
        }
    }
}

#[test]
fn schur_system_has_no_constant_image() {
    let a = RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
    assert!(!has_constant_image_property(&a));
    assert!(solve_constant_image(&a, &BigInt::one()).is_none());
}
