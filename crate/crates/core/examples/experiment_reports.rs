//! Running a config through the experiment driver and re-verifying the
//! report it produces.
//!
//! ```bash
//! cargo run --example experiment_reports
//! ```

use cr_preimage::experiment::{run_text, Command, RunOptions};

const CONFIG: &str = r#"{
  "matrix": [["1", "1"], ["1", "-1"]],
  "set": { "type": "congruence", "modulus": 3, "residue": 0 },
  "N": 4,
  "budget": { "a_bound": 100 },
  "full": { "seed": 1, "instances": 3, "lo": -10, "hi": 10, "m_max": 2 }
}"#;

fn main() -> cr_preimage::Result<()> {
    let report = run_text(Command::Preimage, CONFIG, &RunOptions::default())?;
    println!("{}", report.human_summary());

    let again = run_text(Command::Preimage, CONFIG, &RunOptions::default())?;
    println!("byte-identical on re-run: {}", report.to_json()? == again.to_json()?);

    let verify = RunOptions { verify_only: true, ..RunOptions::default() };
    let checked = run_text(Command::Preimage, &report.to_json()?, &verify)?;
    println!("{}", checked.human_summary());

    let reseeded = RunOptions { seed_override: Some(99), ..RunOptions::default() };
    let other = run_text(Command::Preimage, CONFIG, &reseeded)?;
    println!("with seed 99: {}", other.human_summary());
    println!("exit code: {}", report.exit_code());
    Ok(())
}
