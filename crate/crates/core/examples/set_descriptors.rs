//! Building sets of integers and of integer vectors, and testing membership.
//!
//! ```bash
//! cargo run --example set_descriptors
//! ```

use num_bigint::BigInt;

use cr_preimage::linalg::RatMatrix;
use cr_preimage::sequences::IntSeq;
use cr_preimage::sets::{preimage_set, BoxWindow, ZSet};

fn main() -> cr_preimage::Result<()> {
    let odd_or_small = ZSet::Union {
        sets: vec![ZSet::congruence(2, 1), ZSet::periodic(10, &[(0, 2)])],
    };
    let lo = BigInt::from(-5);
    let hi = BigInt::from(15);
    println!("odd or ≡ 0..2 mod 10 in [-5, 15]: {:?}", odd_or_small.enumerate(&lo, &hi, 1_000)?);

    let sums = ZSet::FiniteSums { generator: IntSeq::from_i64(&[1, 2, 4, 8]), depth: 2 };
    println!("sums of at most two of 1, 2, 4, 8: {:?}", sums.enumerate(&BigInt::from(0), &BigInt::from(16), 1_000)?);

    let shifted = ZSet::multiples(7).shifted(3).complement();
    println!("3 is outside the complement of 3 + 7ℤ: {}", !shifted.contains(&BigInt::from(3)));

    let a = RatMatrix::parse(&[&["1/2", "1/2"], &["1", "-1"]])?;
    let c = preimage_set(&a, &ZSet::multiples(3));
    let window = BoxWindow::cube(2, -6, 6);
    let points = c.enumerate(&window, 10_000)?;
    println!("{} points of the preimage in [-6, 6]², for example {:?}", points.len(), points.first());
    Ok(())
}
