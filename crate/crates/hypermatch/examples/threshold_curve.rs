//! Monte Carlo survival curve: how often a sparsification keeps a perfect
//! matching, as a function of the keep probability.
//!
//! Run with: cargo run --release --example threshold_curve

use hypermatch::hypergraph::complete_kgraph;
use hypermatch::mc::{mc_threshold, threshold_csv};
use hypermatch::pattern::PatternGraph;

fn main() -> hypermatch::Result<()> {
    let h = complete_kgraph(12, 3)?;
    let grid = [0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
    let points = mc_threshold(&h, &PatternGraph::single_edge(3), &grid, 400, 1)?;
    println!("{}", threshold_csv(&points).trim_end());
    for pt in &points {
        let bar = "#".repeat((pt.successes * 40 / pt.trials) as usize);
        println!("p={:<5} {:>5}/{} {}", pt.p, pt.successes, pt.trials, bar);
    }
    Ok(())
}
