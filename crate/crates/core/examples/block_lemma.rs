//! Divisibility blocks for a small family of sequences.
//!
//! ```bash
//! cargo run --example block_lemma
//! ```

use num_bigint::BigInt;

use cr_preimage::blocks::{block_width, build_blocks, verify_blocks};
use cr_preimage::sequences::{IntSeq, SeqGenerator};

fn main() -> cr_preimage::Result<()> {
    let d = BigInt::from(3);
    let squares = SeqGenerator::Polynomial { coefficients: vec![0.into(), 0.into(), 1.into()] };
    let n_blocks = 4;
    let k = block_width(&d, 2);
    let len = n_blocks * usize::try_from(&k).expect("small width");
    let family = vec![
        IntSeq::from_fn(len, BigInt::from),
        squares.generate(len)?,
    ];

    let bf = build_blocks(&family, &d, n_blocks)?;
    println!("d = {d}, two sequences, window width k = {k}");
    for (n, block) in bf.blocks.iter().enumerate() {
        let sums: Vec<String> = family.iter().map(|f| f.block_sum(block).map(|s| s.to_string())).collect::<Result<_, _>>()?;
        println!("K_{} = {:?}  sums = [{}]", n + 1, block, sums.join(", "));
    }
    println!("verified: {}", verify_blocks(&family, &d, &bf));
    Ok(())
}
