//! Generators, degree queries, and the text format.
//!
//! Run with: cargo run --example generate_and_analyze

use hypermatch::bitset::VSet;
use hypermatch::hypergraph::{complete_kgraph, divisibility_barrier, random_kgraph, Hypergraph};

fn main() -> hypermatch::Result<()> {
    let k9 = complete_kgraph(9, 3)?;
    println!(
        "complete K_9^(3): {} edges, δ₂ = {}",
        k9.edge_count(),
        k9.min_degree(2)?
    );

    // the parity-obstructed instance stays dense but has no perfect matching
    let barrier = divisibility_barrier(12, 3, 5)?;
    println!(
        "barrier(12,3,5): {} edges, δ₂ = {}, δ₁ = {}",
        barrier.edge_count(),
        barrier.min_degree(2)?,
        barrier.min_degree(1)?
    );
    let pair = VSet::from_slice(&[0, 5]);
    println!(
        "  codegree of a split pair {:?}: {}",
        pair.to_vec(),
        barrier.codegree(&pair)?
    );

    let sparse = random_kgraph(10, 3, 0.3, 42)?;
    println!("random(10,3,p=0.3,seed=42): {} edges", sparse.edge_count());

    // round trip through the text format
    let text = sparse.to_text();
    let back = Hypergraph::parse(&text)?.graph;
    assert_eq!(back.to_text(), text);
    println!(
        "text round-trip ok; first lines:\n{}",
        text.lines().take(3).collect::<Vec<_>>().join("\n")
    );
    Ok(())
}
