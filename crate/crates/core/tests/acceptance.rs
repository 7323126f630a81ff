//! Full acceptance run: executes every suite criterion with the default
//! seed and prints one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use hscoh::cohomology::Settings;
use hscoh::suite::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let settings = Settings {
        max_rows: 100_000_000,
    };
    let mut failures = Vec::new();
    for &(index, name) in CRITERIA.iter() {
        match run_criterion(index, 0, &settings) {
            Ok(outcome) => {
                let verdict = if outcome.pass { "PASS" } else { "FAIL" };
                println!(
                    "criterion {index:2} {name}: {verdict} ({} ms) {}",
                    outcome.millis, outcome.detail
                );
                if !outcome.pass {
                    failures.push(format!("{index} {name}: {}", outcome.detail));
                }
            }
            Err(e) => {
                println!("criterion {index:2} {name}: ERROR {e}");
                failures.push(format!("{index} {name}: error {e}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
