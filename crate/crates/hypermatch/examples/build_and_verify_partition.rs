//! Reachability partitions: building one on a parity barrier, inspecting the
//! robust profile, and verifying the partition properties.
//!
//! Run with: cargo run --example build_and_verify_partition

use hypermatch::frac::Frac;
use hypermatch::hypergraph::divisibility_barrier;
use hypermatch::partition::VertexPartition;
use hypermatch::pattern::PatternGraph;
use hypermatch::robustness::{
    build_partition, verify_partition, BuildParams, GoodPartition, VerifyMode, VerifyParams,
};

fn main() -> hypermatch::Result<()> {
    let h = divisibility_barrier(12, 3, 5)?;
    let f = PatternGraph::single_edge(3);
    let params = BuildParams::defaults(Frac::new(1, 24)?, 3)?;
    let out = build_partition(&h, &f, &params)?;
    let p = &out.good.partition;
    println!(
        "built partition: d = {}, parts {:?}",
        p.d(),
        p.parts().iter().map(|s| s.to_vec()).collect::<Vec<_>>()
    );
    println!(
        "robust vectors at μ = {}: {:?} (threshold {})",
        out.profile.mu, out.profile.robust_vectors, out.profile.threshold
    );
    println!(
        "weak vertices: {:?}, relocations: {:?}",
        out.diagnostics.weak_vertices, out.diagnostics.relocations
    );

    let vp = VerifyParams {
        beta: Frac::new(1, 1000)?,
        t: 1,
        epsilon: Frac::new(1, 100)?,
        mu: Frac::new(1, 1000)?,
        mode: VerifyMode::Exhaustive,
        max_exhaustive_subsets: 1_000_000,
    };
    let report = verify_partition(&h, &f, &out.good, &vp)?;
    println!(
        "verification: sizes {} | robust links {} | closedness {} ({} pairs)",
        report.sizes_ok, report.robust_links_ok, report.closedness_ok, report.pairs_checked
    );

    // forcing everything into one part breaks closedness across the parity
    // classes, and the report names a counterexample pair
    let forced = GoodPartition {
        partition: VertexPartition::trivial(12),
        beta: Frac::new(1, 1000)?,
        t: 1,
        min_part_fraction: Frac::new(1, 12)?,
        certificates: None,
    };
    let broken = verify_partition(&h, &f, &forced, &vp)?;
    println!(
        "forced d=1 verification: closedness {} (failing pairs {:?})",
        broken.closedness_ok, broken.failing_pairs
    );
    Ok(())
}
