//! Runs every acceptance criterion and prints one line per criterion.
//! Exits with status 1 if any criterion fails.

use std::process::ExitCode;

use drzero::acceptance::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("DRZERO_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance criteria (seed {seed})");
    let mut failed = 0;
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id, seed);
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
