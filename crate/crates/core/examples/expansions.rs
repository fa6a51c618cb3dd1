//! Enumerates every split and pseudo-transition diagram of a label sequence.
//!
//! `cargo run --example expansions -- 1 2 1 2 2` (labels, at least two)

use dbn::expansion::{branch_variant_count, enumerate_completions, enumerate_splits};
use dbn::{Label, OutputDigraph};

fn main() -> dbn::Result<()> {
    let mut labels: Vec<u32> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if labels.is_empty() {
        labels = vec![1, 2, 1, 2, 2];
    }
    let g = OutputDigraph::from_labels(&labels)?;
    println!("output digraph of {labels:?}: {}", g.edge_list().trim_end().replace('\n', ", "));
    let predicted: u64 = g
        .vertices()
        .iter()
        .map(|&v| branch_variant_count(g.out_degree(v), g.has_edge(v, v)))
        .product();

    let splits = enumerate_splits(&g)?;
    println!("{} functional digraphs (predicted {predicted}):", splits.len());
    let nodes = 2;
    for h in &splits {
        let completions = if h.len() <= 4 { enumerate_completions(h, nodes)?.len() } else { 0 };
        let branch: Vec<Label> = h.vertices().filter(|v| matches!(v, Label::Copy { .. })).collect();
        println!(
            "  {}  ({} vertices, copies {:?}, {} pseudo-transition diagrams for 2 nodes)",
            h.edge_list().trim_end().replace('\n', ", "),
            h.len(),
            branch.iter().map(ToString::to_string).collect::<Vec<_>>(),
            completions
        );
    }
    Ok(())
}
