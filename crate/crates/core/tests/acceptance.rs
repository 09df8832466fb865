//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Also writes the four-eight constraint verdict to
//! `$CARGO_TARGET_TMPDIR/four_eight_constraint_verdict.json`.

use std::process::ExitCode;

use ccent::verify::{four_eight_verdict, run_suite, Suite, DEFAULT_SEED};

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }

    let results = run_suite(Suite::All, DEFAULT_SEED);
    for r in &results {
        println!("{r}");
    }

    let verdict = four_eight_verdict(DEFAULT_SEED).expect("verdict");
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("four_eight_constraint_verdict.json");
    std::fs::write(&path, serde_json::to_string_pretty(&verdict).expect("serializable")).expect("artifact written");
    println!(
        "four-eight constraint: alternating \"{}\", oracle supports \"{}\" ({}); artifact {}",
        verdict.alternating_constraint,
        verdict.oracle_constraint,
        verdict.supported,
        path.display()
    );

    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
