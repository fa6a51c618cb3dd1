//! Runs one campaign and writes the five output files.
//!
//! `cargo run --release --example campaign -- <type> <trials> <steps> <seed> <out-dir>`

use std::path::PathBuf;

use dbn::harness::{run_campaign, write_outputs};
use dbn::{PermutationStrategy, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let strategy = args
        .first()
        .and_then(|s| PermutationStrategy::parse(s))
        .unwrap_or(PermutationStrategy::Type1);
    let num = |i: usize, d: u64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let cfg = SimulationConfig::new(strategy, num(1, 100), num(2, 2000), num(3, 1));
    let out = args.get(4).map(PathBuf::from).unwrap_or_else(|| "campaign-out".into());

    let start = std::time::Instant::now();
    let summary = run_campaign(&cfg)?;
    write_outputs(&summary, &out)?;
    println!("{:.1?} elapsed", start.elapsed());
    print!("{}", std::fs::read_to_string(out.join("summary.txt"))?);
    Ok(())
}
