//! The two-node transition matrices without a fixed point, drawn on the
//! 16×16 rule-vector grid, and the six 4-cycles among them.
//!
//! `cargo run --example fixed_point_free`

use dbn::harness::block_pattern_check;
use dbn::{BooleanMatrix, Permutation, RuleVector};

fn main() -> dbn::Result<()> {
    let all: Vec<RuleVector> = (0..256).map(|c| RuleVector::from_code(2, c)).collect::<dbn::Result<_>>()?;
    let free: Vec<&RuleVector> = all
        .iter()
        .filter(|rv| !BooleanMatrix::from_rule_vector(rv).has_fixed_point())
        .collect();
    println!("{} of 256 matrices have no fixed point (3^4)", free.len());

    println!("\n   f2 1234567890123456");
    for f1 in 1..=16u64 {
        let row: String = (1..=16u64)
            .map(|f2| {
                let rv = RuleVector::from_numbers(&[f1, f2]).expect("valid");
                if BooleanMatrix::from_rule_vector(&rv).has_fixed_point() { '.' } else { '#' }
            })
            .collect();
        println!("f1 {f1:>2} {row}");
    }

    let set: Vec<RuleVector> = free.into_iter().cloned().collect();
    let report = block_pattern_check(&set)?;
    println!(
        "\n{} nonempty 4x4 blocks, shared in-block pattern of {} cells, block layout is the pattern upside down: {}",
        report.nonempty_blocks, report.pattern_cells, report.layout_is_flipped_pattern
    );

    println!("\n4-cycles as rule vectors (f1,f2) and with components swapped:");
    for p in Permutation::all(4).into_iter().filter(|p| p.cycles().iter().any(|c| c.len() == 4)) {
        let rv = p.matrix()?.to_rule_vector();
        let n = rv.numbers();
        println!("  {p:<10} {rv:<8} ({},{})", n[1], n[0]);
    }
    Ok(())
}
