//! Pattern density parameters and factor-threshold scaling.
//!
//! Run with: cargo run --example density_parameters

use hypermatch::decision::density_params;
use hypermatch::pattern::PatternGraph;

fn main() -> hypermatch::Result<()> {
    for (name, f) in [
        ("triangle K_3", PatternGraph::triangle()),
        ("path P_3", PatternGraph::path(3)),
        ("clique K_4", PatternGraph::clique(4)),
        ("single 3-edge", PatternGraph::single_edge(3)),
    ] {
        let d = density_params(&f)?;
        println!(
            "{name}: d1 = {}, m1 = {}, e = {}, strictly 1-balanced: {}",
            d.d1, d.m1, d.e_f, d.strictly_1_balanced
        );
        println!(
            "  factor threshold scale: n^-({}) · (log n)^({})",
            d.threshold.n_exponent, d.threshold.log_power
        );
    }
    Ok(())
}
