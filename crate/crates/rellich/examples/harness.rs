//! Randomized margins for every supporting inequality (seed 42, 20 cases each).

use rellich::harness::{run_harness, HarnessConfig};

fn main() -> rellich::Result<()> {
    let config = HarnessConfig { cases: 20, ..HarnessConfig::default() };
    let report = run_harness(&config)?;
    print!("{}", report.to_csv());
    println!("all passed: {}", report.all_passed);
    Ok(())
}
