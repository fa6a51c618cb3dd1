//! Prints one trace line per time step of a single engine run.
//!
//! `cargo run --example trace -- <type> <steps> <seed>`

use dbn::{Engine, EngineConfig, PermutationStrategy, RngChooser};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dbn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let strategy = args
        .first()
        .and_then(|s| PermutationStrategy::parse(s))
        .unwrap_or(PermutationStrategy::Type1);
    let steps: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0);

    let mut chooser = RngChooser(ChaCha8Rng::seed_from_u64(seed));
    let mut engine = Engine::init(EngineConfig::new(2, strategy), &mut chooser)?;
    println!("{}", engine.trace_line());
    for _ in 1..steps {
        engine.advance(&mut chooser)?;
        println!("{}", engine.trace_line());
    }
    Ok(())
}
