//! Transporting a witness for B ⊆ ℤ to the preimage {y : A y ∈ B^u}.
//!
//! ```bash
//! cargo run --example preimage_transform
//! ```

use cr_preimage::linalg::RatMatrix;
use cr_preimage::sequences::SeqFamily;
use cr_preimage::sets::ZSet;
use cr_preimage::transform::{transform_cr_full, transform_witness, verify_transform, FamilyGenerator};
use cr_preimage::witness::SearchBudget;

fn main() -> cr_preimage::Result<()> {
    let a = RatMatrix::parse(&[&["1/2", "1/2"]])?;
    let b = ZSet::congruence(3, 1);
    let n_blocks = 6;
    let budget = SearchBudget::new(100, n_blocks);

    let family = SeqFamily::seeded_uniform(42, 1, 2, 5 * n_blocks, -20, 20)?;
    let trace = transform_witness(&a, &b, &family, n_blocks, &budget)?;
    println!("d = {}, k = {}, blocks = {:?}", trace.d, trace.k, trace.blocks.blocks);
    println!(
        "oracle: a = {}, G = {:?}; x = {:?}; K = {:?}",
        trace.oracle_witness.a, trace.oracle_witness.h, trace.x, trace.k_set
    );
    println!("outputs x + Σ_K f = {:?}", trace.outputs);
    println!("re-verified from the trace: {}", verify_transform(&trace, &b, &family));

    let generator = FamilyGenerator { seed: 7, instances: 5, lo: -20, hi: 20 };
    let full = transform_cr_full(&RatMatrix::from_i64(&[&[1, 1], &[1, -1]]), &ZSet::multiples(5), &generator, 2, 8, &budget)?;
    println!(
        "full run: {} instances, {} verified, {} exhausted, {} failed",
        full.summary.instances, full.summary.verified, full.summary.exhausted, full.summary.failed
    );
    Ok(())
}
