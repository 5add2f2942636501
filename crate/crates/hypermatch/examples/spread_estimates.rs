//! Spread estimation: copy-containment frequencies for the uniform
//! perfect-matching sampler on K_9 against exact oracle ratios, and vertex
//! spread of a window sampler.
//!
//! Run with: cargo run --release --example spread_estimates

use hypermatch::decision::{count_perfect_matchings, count_perfect_matchings_on};
use hypermatch::frac::Frac;
use hypermatch::hypergraph::complete_kgraph;
use hypermatch::pattern::PatternGraph;
use hypermatch::spread::{
    enumerate_factors, estimate_factor_spread, estimate_vertex_spread, uniform_factor_sampler,
};
use rand::seq::SliceRandom;

fn main() -> hypermatch::Result<()> {
    let h = complete_kgraph(9, 3)?;
    let f = PatternGraph::single_edge(3);
    let all = enumerate_factors(&h, &f)?;
    let total = count_perfect_matchings(&h).count;
    println!(
        "K_9^(3): {} perfect matchings enumerated (count {})",
        all.len(),
        total
    );

    // exact oracle ratio for one edge: matchings containing {0,1,2}
    let e = hypermatch::bitset::VSet::from_slice(&[0, 1, 2]);
    let containing = count_perfect_matchings_on(&h, h.vertex_set().minus(&e)).count;
    println!("oracle: P[{:?} ∈ M] = {}/{}", e.to_vec(), containing, total);

    let sampler = uniform_factor_sampler(all, 11);
    let trials = 10_000;
    let (est, singles) = estimate_factor_spread(&sampler, 9, Frac::new(1, 2)?, trials, None);
    let observed = singles
        .iter()
        .find(|(s, _)| *s == e)
        .map(|(_, c)| *c)
        .unwrap_or(0);
    println!(
        "sampled: {:.4} over {} trials; fitted spread constant {:.2}",
        observed as f64 / trials as f64,
        trials,
        est.fitted_constant
    );
    if let Some(pair) = est.max_pair {
        println!(
            "max pair event: {} at {:.4}",
            pair.description, pair.frequency
        );
    }

    // vertex spread of a toy window sampler: shuffle 12 vertices into three
    // windows of four
    let vertex_est = estimate_vertex_spread(
        |trial| {
            let mut perm: Vec<usize> = (0..12).collect();
            perm.shuffle(&mut hypermatch::rng::substream(3, trial));
            let mut assign = vec![0usize; 12];
            for (pos, &v) in perm.iter().enumerate() {
                assign[v] = pos / 4;
            }
            Some(assign)
        },
        12,
        3,
        10_000,
        Some(4.5 / 12.0),
    );
    println!(
        "window sampler: max placement frequency {:.4} (uniform would be 1/3), fitted C' = {:.2}, exceedances: {}",
        vertex_est.max_single.as_ref().map(|e| e.frequency).unwrap_or(0.0),
        vertex_est.fitted_constant,
        vertex_est.exceedances.len()
    );
    Ok(())
}
