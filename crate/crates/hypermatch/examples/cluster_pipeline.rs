//! The randomized cluster pipeline, stage by stage: window sampling,
//! classification, redistribution, cyclic ordering, residue correction, and
//! per-cluster factor assembly.
//!
//! Run with: cargo run --example cluster_pipeline

use hypermatch::cluster::{sample_clusters, sample_f_factor, ClassifyThresholds, PipelineParams};
use hypermatch::frac::Frac;
use hypermatch::hypergraph::complete_kgraph;
use hypermatch::lattice::CosetContext;
use hypermatch::partition::VertexPartition;
use hypermatch::pattern::PatternGraph;
use hypermatch::robustness::robust_profile;

fn main() -> hypermatch::Result<()> {
    let h = complete_kgraph(24, 3)?;
    let f = PatternGraph::single_edge(3);
    let p = VertexPartition::trivial(24);
    let profile = robust_profile(&h, &f, &p, Frac::new(1, 1000)?)?;

    let raw = sample_clusters(&h, 12, 5)?;
    println!(
        "windows (leading-window arithmetic: {}): sizes {:?}",
        raw.leading_window, raw.window_sizes
    );

    let thresholds = ClassifyThresholds::derive(
        Frac::ONE,           // host part fraction (trivial partition)
        Frac::new(1, 100)?,  // ε
        Frac::new(1, 24)?,   // γ
        Frac::new(1, 1000)?, // β
        Frac::new(1, 1000)?, // μ
        Frac::new(1, 3)?,    // δ
        2,                   // degree order ℓ
        1,                   // closedness t
        3,                   // r
        1,                   // q
        1,                   // d
        12,                  // cluster scale C
    )?;
    let params = PipelineParams::new(12, 1, 5, thresholds);
    match sample_f_factor(&h, &f, &p, &profile, &params) {
        Ok(run) => {
            println!(
                "pipeline succeeded in {} attempt(s): {} clusters of sizes {:?}",
                run.attempts,
                run.plan.clusters.len(),
                run.plan.sizes
            );
            println!(
                "  imports per cluster: {:?}",
                run.plan
                    .j_imports
                    .iter()
                    .map(|j| j.len())
                    .collect::<Vec<_>>()
            );
            println!("  matching of {} edges verified", run.witness.copies.len());
            let ctx = CosetContext::new(&profile.lattice()?, 3)?;
            println!(
                "  residue conservation: {}",
                run.plan.residue_conserved(&ctx, &p)?
            );
        }
        Err(failure) => println!("pipeline failed: {failure}"),
    }
    Ok(())
}
