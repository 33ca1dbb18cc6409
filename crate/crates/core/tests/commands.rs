use cr_preimage::experiment::{run_text, Command, RunOptions};
use cr_preimage::Error;

fn run(command: Command, text: &str) -> cr_preimage::Result<cr_preimage::experiment::Report> {
    run_text(command, text, &RunOptions::default())
}

#[test]
fn counting_sequence_blocks() {
    let report = run(
        Command::Blocks,
        r#"{"d": 2, "N": 2, "family": {"kind": "explicit", "members": [[{"kind": "arithmetic", "start": 1, "step": 1}]]}}"#,
    )
    .unwrap();
    assert_eq!(report.exit_code(), 0);
    assert_eq!(report.instances[0]["blocks"]["blocks"], serde_json::json!([[1, 3], [4, 6]]));
}

#[test]
fn unit_modulus_gives_singleton_blocks() {
    let report = run(
        Command::Blocks,
        r#"{"d": 1, "N": 3, "family": {"kind": "seeded_uniform", "seed": 2, "m": 2, "dim": 1, "lo": -5, "hi": 5}}"#,
    )
    .unwrap();
    assert_eq!(report.instances[0]["blocks"]["blocks"], serde_json::json!([[1], [2], [3]]));
    assert_eq!(report.instances[0]["blocks"]["k"], "1");
}

#[test]
fn short_prefix_reports_the_required_length() {
    let err = run(
        Command::Blocks,
        r#"{"d": 2, "N": 3, "len": 7, "family": {"kind": "explicit", "members": [[{"kind": "arithmetic", "start": 1, "step": 1}]]}}"#,
    )
    .unwrap_err();
    match err {
        Error::PrefixTooShort { required, available } => {
            assert_eq!(required, 9.into());
            assert_eq!(available, 7);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn identity_pipeline_on_even_numbers() {
    let report = run(
        Command::Preimage,
        r#"{"matrix": [["1"]], "set": {"type": "congruence", "modulus": 2, "residue": 0}, "N": 3,
            "budget": {"a_bound": 10},
            "family": {"kind": "explicit", "members": [[{"kind": "table", "values": [1, 1, 5]}]]}}"#,
    )
    .unwrap();
    assert_eq!(report.exit_code(), 0);
    let trace = &report.instances[0]["trace"];
    assert_eq!(trace["oracle_witness"]["a"], "0");
    assert_eq!(trace["oracle_witness"]["H"], serde_json::json!([1, 2]));
    assert_eq!(trace["outputs"], serde_json::json!([["2"]]));
}

#[test]
fn pinned_preimage_sample() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/preimage.json")).unwrap();
    let report = run(Command::Preimage, &text).unwrap();
    let trace = &report.instances[0]["trace"];
    assert_eq!(trace["oracle_witness"]["a"], "0");
    assert_eq!(trace["oracle_witness"]["H"], serde_json::json!([1, 2, 3]));
    assert_eq!(trace["x"], serde_json::json!(["0", "0"]));
    assert_eq!(trace["K"], serde_json::json!([1, 2, 3]));
    assert_eq!(trace["outputs"], serde_json::json!([["3", "0"]]));
}

#[test]
fn schur_matrix_is_refused() {
    let report = run(
        Command::Preimage,
        r#"{"matrix": [["1", "0"], ["0", "1"], ["1", "1"]], "set": {"type": "congruence", "modulus": 2, "residue": 0},
            "N": 2, "budget": {"a_bound": 5},
            "family": {"kind": "seeded_uniform", "seed": 1, "m": 1, "dim": 2, "lo": 0, "hi": 9}}"#,
    )
    .unwrap();
    assert_eq!(report.exit_code(), 2);
    assert_eq!(report.instances[0]["status"], "failed");
    assert_eq!(report.instances[0]["error"], Error::ConstantImageUnsolvable.to_string());
}

#[test]
fn single_set_chain() {
    let report = run(
        Command::Chain,
        r#"{"matrix": [["1"]], "chain": {"sets": [{"type": "congruence", "modulus": 3, "residue": 0}]},
            "window": {"lo": [-9], "hi": [9]}, "samples": {"seed": 1, "count": 4}}"#,
    )
    .unwrap();
    assert_eq!(report.exit_code(), 0);
    for inst in &report.instances[1..] {
        assert_eq!(inst["shift"]["m"], 1);
    }
}

#[test]
fn small_m_max_exhausts() {
    let report = run(
        Command::Chain,
        r#"{"matrix": [["1", "1"], ["1", "-1"]],
            "chain": {"sets": [{"type": "congruence", "modulus": 2, "residue": 0},
                               {"type": "congruence", "modulus": 4, "residue": 0}]},
            "window": {"lo": [-8, -8], "hi": [8, 8]}, "m_max": 1,
            "samples": {"seed": 3, "count": 6, "levels": [2]}}"#,
    )
    .unwrap();
    assert_eq!(report.summary.exhausted, 6);
    assert_eq!(report.exit_code(), 1);
}
