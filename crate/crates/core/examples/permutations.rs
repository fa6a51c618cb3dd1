//! Permutation strategies and what conjugation does to a transition matrix.
//!
//! `cargo run --example permutations -- [seed]`

use dbn::engine::{build_type4_permutation, conjugate};
use dbn::vbn::attractors;
use dbn::{BooleanMatrix, Labeling, PermutationStrategy, RngChooser};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dbn::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(seed));

    for strategy in PermutationStrategy::ALL {
        let Ok(support) = strategy.support(2) else {
            println!("{strategy:>7}: drawn per step from the current labeling");
            continue;
        };
        let shown: Vec<String> = support.iter().take(6).map(ToString::to_string).collect();
        println!("{strategy:>7}: {:>2} permutations  {} ...", support.len(), shown.join(" "));
    }

    // Type 4 cycles each label class in a random order, so a class of
    // three has two possible images and a singleton stays put.
    let xi = Labeling::new(2, vec![3, 3, 1, 3])?;
    println!("\nXi = [{xi}]");
    for _ in 0..6 {
        println!("  type 4 draw: {}", build_type4_permutation(&xi, &mut ch));
    }

    // Conjugation relabels states, so the cycle structure survives.
    let t = BooleanMatrix::parse_rows("0100/0100/0001/1000")?;
    let p = build_type4_permutation(&Labeling::constant(2, 1)?, &mut ch);
    let c = conjugate(&t, &p)?;
    println!("\nT = {t}  rules {}", t.to_rule_vector());
    println!("P = {p}, Q^-1 T Q = {c}  rules {}", c.to_rule_vector());
    println!(
        "cycle lengths {:?} -> {:?}, basin sizes {:?} -> {:?}",
        attractors(&t).cycle_lengths(),
        attractors(&c).cycle_lengths(),
        attractors(&t).basin_sizes(),
        attractors(&c).basin_sizes()
    );
    Ok(())
}
