//! Runs a bundled scenario file and prints the text report.

use equivar::scenario::{run_scenario, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/c2-dual-numbers.json").into());
    let scenario = Scenario::load(std::path::Path::new(&path))?;
    let report = run_scenario(&scenario, 0, false)?;
    print!("{}", report.to_text());
    Ok(())
}
