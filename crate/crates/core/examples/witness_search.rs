//! Canonical witness searches in sequence form and matrix form.
//!
//! ```bash
//! cargo run --example witness_search
//! ```

use num_bigint::BigInt;

use cr_preimage::sequences::IntSeq;
use cr_preimage::sets::ZSet;
use cr_preimage::witness::{cr_witness, cr_witness_matrix, family_matrix, jset_witness, ps_check, SearchBudget};

fn main() -> cr_preimage::Result<()> {
    let set = ZSet::congruence(5, 2);
    let family = vec![IntSeq::from_i64(&[3, 1, 4, 1, 5]), IntSeq::from_i64(&[9, 2, 6, 5, 3])];
    let budget = SearchBudget::new(10, 5);

    let by_sequence = cr_witness(&set, &family, &budget)?;
    println!("sequence form: {}", serde_json::to_string(&by_sequence)?);

    let matrix = family_matrix(&family, 5)?;
    let by_matrix = cr_witness_matrix(&set, &matrix, &budget);
    println!("matrix form agrees: {}", by_matrix.witness == by_sequence.witness);

    let long = vec![IntSeq::from_fn(40, |t| BigInt::from(t * t))];
    let j = jset_witness(&ZSet::multiples(7), &long, &SearchBudget::new(3, 4))?;
    println!("J-set style search on t²: {}", serde_json::to_string(&j)?);

    let empty = cr_witness(&ZSet::empty(), &family, &budget)?;
    println!("empty set exhausts after {} candidates", empty.examined);

    let g = [BigInt::from(0), BigInt::from(1)].into_iter().collect();
    let f = [BigInt::from(0), BigInt::from(1), BigInt::from(2)].into_iter().collect();
    println!("2ℤ is piecewise syndetic via G = {{0, 1}}: {:?}", ps_check(&ZSet::multiples(2), &g, &f, 10));
    Ok(())
}
