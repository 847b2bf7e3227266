//! Acceptance run: one pass/fail line per criterion, exact comparisons only.
//!
//! Each criterion runs its grid of checks from [`qbgg::cli::suites`] with a
//! fixed seed (override with `QBGG_SEED`) and must also finish within its
//! runtime budget. The process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use qbgg::cli::suites::{criterion, CRITERIA};
use qbgg::coeff::seed_from_env;
use qbgg::report::Status;

/// Runtime budget per criterion in seconds.
const BUDGET_SECS: [u64; 9] = [300, 120, 120, 600, 600, 600, 600, 120, 600];

fn main() {
    let seed = seed_from_env(42);
    let mut failed = 0;
    for (k, description) in CRITERIA.iter().enumerate() {
        let number = k + 1;
        let start = Instant::now();
        let reports = criterion(number, seed, false);
        let elapsed = start.elapsed();
        let failures: Vec<_> = reports.iter().filter(|r| r.status == Status::Fail).collect();
        let over_budget = elapsed > Duration::from_secs(BUDGET_SECS[k]);
        let ok = failures.is_empty() && !reports.is_empty() && !over_budget;
        println!(
            "criterion {number}: {} — {description} ({} checks, {} failed, {:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            reports.len(),
            failures.len(),
            elapsed.as_secs_f64(),
            BUDGET_SECS[k],
        );
        for r in failures {
            println!("    {}", r.to_json_line());
        }
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed (seed {seed})", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
