//! Lattice-guided solubility: the factor decision reduces to finding a small
//! packing whose removal lands the leftover index vector in the robust
//! lattice.
//!
//! Run with: cargo run --example q_solubility

use hypermatch::decision::{find_q_solution, has_f_factor, solubility_bound};
use hypermatch::frac::Frac;
use hypermatch::hypergraph::divisibility_barrier;
use hypermatch::partition::VertexPartition;
use hypermatch::pattern::PatternGraph;
use hypermatch::robustness::robust_profile;

fn main() -> hypermatch::Result<()> {
    let f = PatternGraph::single_edge(3);
    for x in [4usize, 5] {
        let h = divisibility_barrier(12, 3, x)?;
        let p = VertexPartition::new(
            12,
            (0..12u32)
                .map(|v| if (v as usize) < x { 0 } else { 1 })
                .collect(),
        )?;
        let profile = robust_profile(&h, &f, &p, Frac::new(5, 1000)?)?;
        let lattice = profile.lattice()?;
        let q = solubility_bound(&h, &p, Frac::new(1, 4)?)?;
        println!(
            "barrier(12,3,{x}): robust vectors {:?}, total {:?}, q = {q}",
            profile.robust_vectors,
            p.total_vector()
        );
        match find_q_solution(&h, &f, &p, &lattice, q)? {
            Some(w) => println!(
                "  {}-solution of size {} → factor exists: {}",
                q,
                w.copies.len(),
                has_f_factor(&h, &f).is_some()
            ),
            None => println!(
                "  no solution up to size {q} → factor exists: {}",
                has_f_factor(&h, &f).is_some()
            ),
        }
    }
    Ok(())
}
