//! The sparsified decision procedure end to end: build a partition, run the
//! vector-set search against a Bernoulli sparsification oracle, inspect the
//! reveal trace, and cross-check verdicts with the exact oracle.
//!
//! Run with: cargo run --example decide_sparsified

use hypermatch::decision::{
    count_perfect_matchings, procedure_perfect_matching, ProcedureParams, SparsifiedOracle, Verdict,
};
use hypermatch::frac::Frac;
use hypermatch::hypergraph::{complete_kgraph, divisibility_barrier, Hypergraph};
use hypermatch::pattern::PatternGraph;
use hypermatch::robustness::{build_partition, robust_profile, BuildParams};

fn run(h: &Hypergraph, label: &str, p: f64, seed: u64) -> hypermatch::Result<()> {
    let f = PatternGraph::single_edge(h.k());
    let params = BuildParams::defaults(Frac::new(1, (2 * h.n()) as u64)?, h.k())?;
    let partition = build_partition(h, &f, &params)?.good.partition;
    let profile = robust_profile(h, &f, &partition, Frac::new(1, 1000)?)?;
    let mut oracle = SparsifiedOracle::new(h, p, seed)?;
    let out = procedure_perfect_matching(
        h,
        &partition,
        &profile,
        &ProcedureParams {
            eta: Frac::new(1, 1000)?,
            extend: true,
            extension_reveal_cap: None,
        },
        &mut oracle,
    )?;
    println!(
        "{label} at p={p}: {:?} after {} vector sets, {} reveals",
        out.verdict,
        out.vector_sets_tried,
        out.revealed_edges.len()
    );
    if let Some(ext) = &out.extension {
        println!(
            "  extension: matching of {} edges, remainder in lattice: {}",
            ext.extended_matching.len(),
            ext.remainder_in_lattice
        );
    }
    if out.verdict == Verdict::Reject {
        let exact = count_perfect_matchings(&h.sparsify(p, seed)?);
        println!(
            "  exact oracle agrees: sparsification has {} matchings",
            exact.count
        );
    }
    Ok(())
}

fn main() -> hypermatch::Result<()> {
    let k9 = complete_kgraph(9, 3)?;
    run(&k9, "K_9^(3)", 1.0, 7)?;
    run(&k9, "K_9^(3)", 0.0, 7)?; // vacuous accept: the only vector is robust

    let barrier = divisibility_barrier(12, 3, 5)?;
    run(&barrier, "barrier(12,3,5)", 1.0, 7)?;

    let partial = divisibility_barrier(12, 3, 4)?;
    run(&partial, "barrier(12,3,4)", 0.8, 3)?;
    Ok(())
}
