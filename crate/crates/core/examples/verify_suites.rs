//! Runs the seeded identity suites and prints the report.

use grass::verify;
use grass::Result;

fn main() -> Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    for suite in verify::SUITES {
        let report = verify::run_suite(suite, seed, 10)?;
        println!("{suite:<10} {} cases, {} failures, {:.2?}", report.cases, report.failures.len(), report.wall_time);
        for f in &report.failures {
            println!("  {} (seed {}): {}", f.construction, f.seed, f.detail);
        }
    }
    Ok(())
}
