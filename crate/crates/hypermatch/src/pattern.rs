//! Pattern graphs F and copy counting.
//!
//! A copy of F in H is a subhypergraph of H isomorphic to F: a distinct
//! edge-subset on a distinct r-set of vertices. Counting by embeddings and
//! dividing by |Aut(F)| gives exactly one count per copy, so automorphisms
//! are handled uniformly for every pattern.

use std::collections::BTreeMap;

use crate::bitset::VSet;
use crate::error::{Error, Result};
use crate::hypergraph::{for_each_combination, Hypergraph};
use crate::partition::{IndexVector, VertexPartition};

/// An r-vertex k-uniform pattern on vertices 0..r. Connectivity is not
/// required; for perfect matchings use [`PatternGraph::single_edge`].
#[derive(Debug)]
pub struct PatternGraph {
    r: usize,
    k: usize,
    edges: Vec<Vec<u32>>,
    aut: std::sync::OnceLock<u64>,
}

impl Clone for PatternGraph {
    fn clone(&self) -> Self {
        PatternGraph {
            r: self.r,
            k: self.k,
            edges: self.edges.clone(),
            aut: self.aut.clone(),
        }
    }
}

impl PartialEq for PatternGraph {
    fn eq(&self, other: &Self) -> bool {
        (self.r, self.k, &self.edges) == (other.r, other.k, &other.edges)
    }
}
impl Eq for PatternGraph {}

impl PatternGraph {
    pub fn new(r: usize, k: usize, edge_lists: Vec<Vec<u32>>) -> Result<PatternGraph> {
        let mut edges: Vec<Vec<u32>> = Vec::with_capacity(edge_lists.len());
        for mut e in edge_lists {
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadEdge(e, k));
            }
            if let Some(&v) = e.iter().find(|&&v| v as usize >= r) {
                return Err(Error::VertexOutOfRange { vertex: v, n: r });
            }
            edges.push(e);
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(PatternGraph {
            r,
            k,
            edges,
            aut: std::sync::OnceLock::new(),
        })
    }

    /// The single k-edge on k vertices: the pattern whose factors are
    /// perfect matchings.
    pub fn single_edge(k: usize) -> PatternGraph {
        PatternGraph::new(k, k, vec![(0..k as u32).collect()]).expect("valid")
    }

    /// Complete 2-graph K_r.
    pub fn clique(r: usize) -> PatternGraph {
        let mut edges = Vec::new();
        for a in 0..r as u32 {
            for b in a + 1..r as u32 {
                edges.push(vec![a, b]);
            }
        }
        PatternGraph::new(r, 2, edges).expect("valid")
    }

    pub fn triangle() -> PatternGraph {
        Self::clique(3)
    }

    /// 2-graph path on `v` vertices (v−1 edges).
    pub fn path(v: usize) -> PatternGraph {
        let edges = (0..v as u32 - 1).map(|a| vec![a, a + 1]).collect();
        PatternGraph::new(v, 2, edges).expect("valid")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn is_single_edge(&self) -> bool {
        self.r == self.k && self.edges.len() == 1
    }

    /// Number of bijections 0..r → targets mapping every pattern edge into
    /// `h` (targets must have exactly r members, all edges within `within`).
    fn embeddings_into(&self, h: &Hypergraph, targets: &[u32]) -> u64 {
        debug_assert_eq!(targets.len(), self.r);
        // pattern edges as bitmasks over pattern vertices for quick "fully
        // mapped" checks
        let mut count = 0u64;
        let mut image = vec![u32::MAX; self.r];
        let mut used = vec![false; self.r];
        self.embed_rec(h, targets, 0, &mut image, &mut used, &mut count);
        count
    }

    fn embed_rec(
        &self,
        h: &Hypergraph,
        targets: &[u32],
        depth: usize,
        image: &mut [u32],
        used: &mut [bool],
        count: &mut u64,
    ) {
        if depth == self.r {
            *count += 1;
            return;
        }
        'cand: for t in 0..self.r {
            if used[t] {
                continue;
            }
            image[depth] = targets[t];
            // check every pattern edge whose vertices are all mapped now
            for e in &self.edges {
                if e.iter().all(|&pv| (pv as usize) <= depth) && e.contains(&(depth as u32)) {
                    let mapped: VSet = e.iter().map(|&pv| image[pv as usize]).collect();
                    if !h.contains_edge(&mapped) {
                        continue 'cand;
                    }
                }
            }
            used[t] = true;
            self.embed_rec(h, targets, depth + 1, image, used, count);
            used[t] = false;
        }
    }

    /// |Aut(F)|: bijections of the pattern onto itself preserving edges.
    pub fn automorphisms(&self) -> u64 {
        *self.aut.get_or_init(|| {
            // Self-embedding needs edge-subset equality, which is automatic
            // for bijections mapping edges into an edge set of equal size.
            let me = Hypergraph::new(self.k, self.r, self.edges.clone()).expect("valid");
            let targets: Vec<u32> = (0..self.r as u32).collect();
            self.embeddings_into(&me, &targets)
        })
    }

    /// Number of copies of F spanned by the vertex set `s` (|s| = r).
    pub fn copies_on(&self, h: &Hypergraph, s: &VSet) -> u64 {
        if self.is_single_edge() {
            return h.contains_edge(s) as u64;
        }
        let targets = s.to_vec();
        if targets.len() != self.r {
            return 0;
        }
        self.embeddings_into(h, &targets) / self.automorphisms()
    }

    /// Whether `s` spans at least one copy of F.
    pub fn spans(&self, h: &Hypergraph, s: &VSet) -> bool {
        if self.is_single_edge() {
            return h.contains_edge(s);
        }
        self.copies_on(h, s) > 0
    }

    /// All r-sets spanning at least one copy, restricted to `within`,
    /// in canonical (ascending vertex list) order.
    pub fn copy_sets_within(&self, h: &Hypergraph, within: &VSet) -> Vec<VSet> {
        if self.is_single_edge() {
            return h
                .edge_sets()
                .iter()
                .filter(|e| e.is_subset_of(within))
                .copied()
                .collect();
        }
        let pool = within.to_vec();
        let mut out = Vec::new();
        for_each_combination(pool.len(), self.r, |c| {
            let s: VSet = c.iter().map(|&i| pool[i]).collect();
            if self.spans(h, &s) {
                out.push(s);
            }
            true
        });
        out
    }
}

/// Copy counts of F in H bucketed by index vector with respect to P.
pub fn pattern_copies(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
) -> Result<BTreeMap<IndexVector, u128>> {
    if f.r() > h.n() {
        return Err(Error::InvalidSizes(format!(
            "pattern order {} > n = {}",
            f.r(),
            h.n()
        )));
    }
    if p.n() != h.n() {
        return Err(Error::InvalidSizes(
            "partition host differs from hypergraph".into(),
        ));
    }
    let mut counts: BTreeMap<IndexVector, u128> = BTreeMap::new();
    if f.is_single_edge() {
        for e in h.edge_sets() {
            *counts.entry(p.index_vector(e)).or_default() += 1;
        }
        return Ok(counts);
    }
    for_each_combination(h.n(), f.r(), |c| {
        let s: VSet = c.iter().map(|&v| v as u32).collect();
        let copies = f.copies_on(h, &s);
        if copies > 0 {
            *counts.entry(p.index_vector(&s)).or_default() += copies as u128;
        }
        true
    });
    Ok(counts)
}
