//! One PASS/FAIL line per acceptance criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use ruelle::cli::suite::{run_criterion, CRITERIA};

const SEED: u64 = 1;
const TOTAL_BUDGET: Duration = Duration::from_secs(300);

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (id, _, _) in CRITERIA {
        let line = match run_criterion(id, SEED) {
            Ok(r) => {
                if !r.pass {
                    failed.push(id);
                }
                r.line()
            }
            Err(e) => {
                failed.push(id);
                format!("criterion {id}: FAIL error: {e}")
            }
        };
        println!("{line}");
        lines.push(line);
    }

    let run = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ruelle"))
        .args(["verify", "--seed", &SEED.to_string()])
        .output()
        .expect("run ruelle verify");
    let verify_secs = run.elapsed().as_secs_f64();
    let total = start.elapsed();
    let code = out.status.code();
    let pass9 = code == Some(0) && total < TOTAL_BUDGET;
    if !pass9 {
        failed.push(9);
    }
    println!(
        "criterion 9: {} [single-invocation suite] verify exit {:?} in {verify_secs:.2}s, total {:.2}s/{}s",
        if pass9 { "PASS" } else { "FAIL" },
        code,
        total.as_secs_f64(),
        TOTAL_BUDGET.as_secs()
    );

    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
