//! Embeds an ordinary Boolean network into a VBN and lists its attractors.
//!
//! The network is a three-node repressilator-style ring:
//! x1' = NOT x3, x2' = x1, x3' = x2.
//!
//! `cargo run --example attractors`

use dbn::vbn::{attractors, embed_bn, BnSpec, LocalRule};
use dbn::BooleanMatrix;

fn main() -> dbn::Result<()> {
    let bn = BnSpec {
        nodes: 3,
        locals: vec![
            LocalRule { incoming: vec![2], table: vec![1, 0] },
            LocalRule { incoming: vec![0], table: vec![0, 1] },
            LocalRule { incoming: vec![1], table: vec![0, 1] },
        ],
    };
    let rv = embed_bn(&bn)?;
    println!("rule vector {rv}");
    for (i, r) in rv.rules().iter().enumerate() {
        let incoming: Vec<usize> = r.virtual_incoming_nodes().iter().map(|n| n + 1).collect();
        println!("  node {}: rule {} reads nodes {incoming:?}", i + 1, r.number());
    }

    let t = BooleanMatrix::from_rule_vector(&rv);
    println!("\ntransition matrix\n{t}");
    let dec = attractors(&t);
    for (cycle, size) in dec.cycles.iter().zip(dec.basin_sizes()) {
        let states: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        println!("attractor {} with basin of {size} states", states.join(" -> "));
    }
    Ok(())
}
