//! Exact perfect-matching counts and factor search.
//!
//! Run with: cargo run --example count_matchings

use hypermatch::decision::{complete_graph_pm_count, count_perfect_matchings, has_f_factor};
use hypermatch::hypergraph::{complete_kgraph, divisibility_barrier};
use hypermatch::pattern::PatternGraph;

fn main() -> hypermatch::Result<()> {
    for n in [6usize, 9, 12] {
        let h = complete_kgraph(n, 3)?;
        let counted = count_perfect_matchings(&h);
        println!(
            "K_{n}^(3): {} perfect matchings (formula {})",
            counted.count,
            complete_graph_pm_count(n, 3)
        );
    }

    let odd = divisibility_barrier(12, 3, 5)?;
    println!(
        "barrier(12,3,5): {} perfect matchings",
        count_perfect_matchings(&odd).count
    );
    let even = divisibility_barrier(12, 3, 4)?;
    println!(
        "barrier(12,3,4): {} perfect matchings",
        count_perfect_matchings(&even).count
    );

    // factors of a non-trivial pattern: triangles in K_6
    let k6 = complete_kgraph(6, 2)?;
    let w = has_f_factor(&k6, &PatternGraph::triangle()).expect("K_6 has a triangle factor");
    println!(
        "triangle factor of K_6: {:?}",
        w.copies.iter().map(|c| c.to_vec()).collect::<Vec<_>>()
    );
    Ok(())
}
