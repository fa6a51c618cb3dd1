//! Single-node rules: the output table, linearity and negation.
//!
//! `cargo run --example rule_table -- [nodes]` (default 2, at most 3)

use dbn::vbn::write_rule_table;
use dbn::Rule;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nodes: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    write_rule_table(nodes, std::io::stdout())?;

    println!("\nlinear rules (x . v mod 2) and their negations:");
    for r in Rule::all(nodes).filter(Rule::is_linear) {
        let mask = r.linear_mask().expect("linear");
        println!(
            "  rule {:>3}  v = {:?}  virtual incoming nodes {:?}  negation {}",
            r.number(),
            mask,
            r.virtual_incoming_nodes().iter().map(|n| n + 1).collect::<Vec<_>>(),
            r.negate().number()
        );
    }
    Ok(())
}
