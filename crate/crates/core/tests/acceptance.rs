//! Acceptance gate: every registered cross-oracle check at its pinned
//! tolerance, one status line per criterion followed by its measurements.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use su_interferometry::verify::{run_check, CheckOutcome, ToleranceOverrides, CHECKS};

fn main() -> ExitCode {
    let overrides = ToleranceOverrides::default();
    assert_eq!(CHECKS.len(), 10, "one check per acceptance criterion");
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    println!("\nrunning {} acceptance criteria", CHECKS.len());
    for check in CHECKS {
        let start = Instant::now();
        let outcome = run_check(check.id, &overrides).expect("registered check");
        let status = if outcome.passed() { "pass" } else { "FAIL" };
        println!("acceptance {} ... {status} ({:.1?})", check.id, start.elapsed());
        outcomes.push(outcome);
    }
    println!();
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    println!(
        "\nacceptance result: {} passed; {} failed{}",
        outcomes.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
