//! Pulling the chain 2ℤ ⊇ 4ℤ ⊇ 8ℤ ⊇ 16ℤ back through a matrix and checking
//! shift indices on a box.
//!
//! ```bash
//! cargo run --example essential_chain
//! ```

use num_bigint::BigInt;

use cr_preimage::chain::{chain_preimage, powers_of_two_chain, WindowedChain};
use cr_preimage::linalg::RatMatrix;
use cr_preimage::sets::BoxWindow;

fn main() -> cr_preimage::Result<()> {
    let a = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
    let chain = powers_of_two_chain(4);
    let preimage = chain_preimage(&a, &chain);
    let window = BoxWindow::cube(2, -32, 32);
    let cached = WindowedChain::new(&preimage, &window, 100_000)?;
    println!("decreasing on the box: {}", cached.is_decreasing());
    for n in 1..=4 {
        println!("level {n}: {} points in the box", cached.members(n)?.len());
    }

    for (n, y) in [(1, [3, 1]), (2, [6, 2]), (3, [4, 4]), (4, [8, -8])] {
        let y: Vec<BigInt> = y.iter().map(|&t| BigInt::from(t)).collect();
        let shift = cached.find_shift_index(&a, &chain, n, &y, &window, 4, 100_000)?;
        println!(
            "y = {:?} in D_{n}: row images {:?}, m_i = {:?}, m = {}, window check {}, brute force {:?}",
            y,
            shift.row_images,
            shift.row_indices,
            shift.m,
            shift.window_check,
            cached.least_shift(n, &y, 4)?
        );
    }
    Ok(())
}
