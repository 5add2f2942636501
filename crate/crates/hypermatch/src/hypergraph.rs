//! k-uniform hypergraphs: canonical storage, file format, degree queries,
//! Bernoulli sparsification, and the stock generators (complete graphs,
//! divisibility barriers, random instances with a codegree floor).
//!
//! Text format: optional `#` comment lines, a header `k n`, then one edge per
//! line as k space-separated 0-based vertex ids. UTF-8, LF line endings.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::Rng;

use crate::bitset::{VSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// Ascending enumeration of all `size`-subsets of `0..pool`, as index vectors.
/// The callback may return `false` to stop early.
pub fn for_each_combination(pool: usize, size: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if size > pool {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance odometer
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + pool - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored canonically: each edge sorted ascending, the edge list
/// sorted lexicographically, no duplicates. The (k−1)-set link index is built
/// eagerly at construction when small enough, lazily on first use otherwise.
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
    sets: Vec<VSet>,
    membership: HashSet<VSet>,
    links: OnceLock<HashMap<VSet, VSet>>,
}

/// Entry budget above which the link index is deferred until first query.
const EAGER_LINK_BUDGET: usize = 2_000_000;

/// Result of parsing: the graph plus non-fatal warnings (deduplicated edges).
pub struct Parsed {
    pub graph: Hypergraph,
    pub warnings: Vec<String>,
}

impl Clone for Hypergraph {
    fn clone(&self) -> Self {
        Hypergraph {
            k: self.k,
            n: self.n,
            edges: self.edges.clone(),
            sets: self.sets.clone(),
            membership: self.membership.clone(),
            links: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Hypergraph(k={}, n={}, m={})",
            self.k,
            self.n,
            self.edges.len()
        )
    }
}

impl Hypergraph {
    pub fn new(k: usize, n: usize, edge_lists: Vec<Vec<u32>>) -> Result<Hypergraph> {
        Self::build(k, n, edge_lists, false).map(|p| p.graph)
    }

    fn build(k: usize, n: usize, edge_lists: Vec<Vec<u32>>, strict_dupes: bool) -> Result<Parsed> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        if k < 2 {
            return Err(Error::InvalidSizes(format!(
                "uniformity k={k} must be at least 2"
            )));
        }
        let mut warnings = Vec::new();
        let mut seen: HashSet<VSet> = HashSet::new();
        let mut canon: Vec<(Vec<u32>, VSet)> = Vec::with_capacity(edge_lists.len());
        for mut e in edge_lists {
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadEdge(e, k));
            }
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let set = VSet::from_slice(&e);
            if !seen.insert(set) {
                if strict_dupes {
                    return Err(Error::DuplicateEdge(e));
                }
                warnings.push(format!("duplicate edge {e:?} dropped"));
                continue;
            }
            canon.push((e, set));
        }
        canon.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let (edges, sets): (Vec<_>, Vec<_>) = canon.into_iter().unzip();
        let graph = Hypergraph {
            k,
            n,
            edges,
            sets,
            membership: seen,
            links: OnceLock::new(),
        };
        if graph.edges.len() * k <= EAGER_LINK_BUDGET {
            graph.link_index();
        }
        Ok(Parsed { graph, warnings })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, as sorted vertex lists.
    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Edges in canonical order, as bitsets (parallel to [`edges`](Self::edges)).
    pub fn edge_sets(&self) -> &[VSet] {
        &self.sets
    }

    pub fn vertex_set(&self) -> VSet {
        VSet::full(self.n)
    }

    #[inline]
    pub fn contains_edge(&self, e: &VSet) -> bool {
        self.membership.contains(e)
    }

    fn link_index(&self) -> &HashMap<VSet, VSet> {
        self.links.get_or_init(|| {
            let mut map: HashMap<VSet, VSet> = HashMap::new();
            for e in &self.edges {
                for drop in 0..self.k {
                    let mut s = VSet::from_slice(e);
                    s.remove(e[drop]);
                    map.entry(s).or_default().insert(e[drop]);
                }
            }
            map
        })
    }

    /// Link of a (k−1)-set: all `v` with `s ∪ {v}` an edge.
    pub fn link(&self, s: &VSet) -> VSet {
        self.link_index().get(s).copied().unwrap_or_default()
    }

    /// Number of edges containing `s` (|s| ≤ k required).
    pub fn codegree(&self, s: &VSet) -> Result<usize> {
        let sz = s.len();
        if sz > self.k {
            return Err(Error::InvalidSizes(format!(
                "codegree set has {sz} vertices but k = {}",
                self.k
            )));
        }
        if let Some(v) = s.iter().find(|&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(if sz == self.k {
            self.contains_edge(s) as usize
        } else if sz == self.k - 1 {
            self.link(s).len()
        } else {
            self.sets.iter().filter(|e| s.is_subset_of(e)).count()
        })
    }

    /// Minimum degree over all `ell`-subsets of the vertex set, `1 ≤ ell ≤ k−1`.
    pub fn min_degree(&self, ell: usize) -> Result<usize> {
        if ell == 0 || ell >= self.k {
            return Err(Error::InvalidSizes(format!(
                "degree order {ell} outside [1, {})",
                self.k
            )));
        }
        if self.n < ell {
            return Err(Error::InvalidSizes(format!("n = {} < ell = {ell}", self.n)));
        }
        let mut min = usize::MAX;
        if ell == self.k - 1 {
            let idx = self.link_index();
            if (idx.len() as u128) < binomial(self.n, ell) {
                return Ok(0); // some (k−1)-set touches no edge
            }
            return Ok(idx.values().map(|l| l.len()).min().unwrap_or(0));
        }
        for_each_combination(self.n, ell, |c| {
            let s: VSet = c.iter().map(|&v| v as u32).collect();
            let deg = self.sets.iter().filter(|e| s.is_subset_of(e)).count();
            min = min.min(deg);
            min > 0
        });
        Ok(if min == usize::MAX { 0 } else { min })
    }

    /// Keep each edge independently with probability `p`, decisions drawn
    /// from a ChaCha12 stream in canonical edge order. Identical
    /// `(self, p, seed)` yields an identical result on every platform.
    pub fn sparsify(&self, p: f64, seed: u64) -> Result<Hypergraph> {
        let keep = self.sparsify_mask(p, seed)?;
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e.clone())
            .collect();
        Hypergraph::new(self.k, self.n, edges)
    }

    /// The per-edge keep decisions behind [`sparsify`](Self::sparsify), in
    /// canonical edge order.
    pub fn sparsify_mask(&self, p: f64, seed: u64) -> Result<Vec<bool>> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut rng = crate::rng::stream(seed);
        Ok(self.edges.iter().map(|_| rng.random::<f64>() < p).collect())
    }

    /// Serialize to the canonical text form (header plus sorted edges).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.k, self.n);
        for e in &self.edges {
            let words: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", words.join(" "));
        }
        out
    }

    /// Parse the text format, deduplicating repeated edges with warnings.
    pub fn parse(text: &str) -> Result<Parsed> {
        Self::parse_impl(text, false)
    }

    /// Parse the text format, treating duplicate edges as hard errors.
    pub fn parse_strict(text: &str) -> Result<Parsed> {
        Self::parse_impl(text, true)
    }

    fn parse_impl(text: &str, strict: bool) -> Result<Parsed> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<Vec<u32>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_num = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected integer, got `{s}`"),
                })
            };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: format!("header must be `k n`, got `{line}`"),
                        });
                    }
                    header = Some((parse_num(fields[0])?, parse_num(fields[1])?));
                }
                Some((k, _)) => {
                    if fields.len() != k {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: format!("edge has {} vertices, expected {k}", fields.len()),
                        });
                    }
                    let mut e = Vec::with_capacity(k);
                    for f in fields {
                        e.push(parse_num(f)? as u32);
                    }
                    edges.push(e);
                }
            }
        }
        let (k, n) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        Self::build(k, n, edges, strict)
    }
}

/// The complete k-graph on n vertices.
pub fn complete_kgraph(n: usize, k: usize) -> Result<Hypergraph> {
    if k > n {
        return Err(Error::InvalidSizes(format!("k = {k} > n = {n}")));
    }
    let mut edges = Vec::new();
    for_each_combination(n, k, |c| {
        edges.push(c.iter().map(|&v| v as u32).collect());
        true
    });
    Hypergraph::new(k, n, edges)
}

/// The parity-obstructed instance: with X = {0, …, x−1}, the edges are
/// exactly the k-sets meeting X in an even number of vertices. Any matching
/// covers an even number of X-vertices, so for odd x (and k | n) no perfect
/// matching exists even though the graph stays dense.
pub fn divisibility_barrier(n: usize, k: usize, x: usize) -> Result<Hypergraph> {
    if x == 0 || x >= n {
        return Err(Error::InvalidSizes(format!(
            "need 0 < x < n, got x = {x}, n = {n}"
        )));
    }
    if k < 3 {
        return Err(Error::InvalidSizes(format!("k = {k} < 3")));
    }
    let mut edges = Vec::new();
    for_each_combination(n, k, |c| {
        let in_x = c.iter().filter(|&&v| v < x).count();
        if in_x % 2 == 0 {
            edges.push(c.iter().map(|&v| v as u32).collect());
        }
        true
    });
    Hypergraph::new(k, n, edges)
}

/// Each k-set kept independently with probability `p` (canonical order).
pub fn random_kgraph(n: usize, k: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = crate::rng::stream(seed);
    let mut edges = Vec::new();
    for_each_combination(n, k, |c| {
        if rng.random::<f64>() < p {
            edges.push(c.iter().map(|&v| v as u32).collect());
        }
        true
    });
    Hypergraph::new(k, n, edges)
}

/// Rejection-sample a random k-graph with `δ_{k−1} ≥ delta_min`. Each attempt
/// uses substream `(seed, attempt)`; fails after `max_tries` rejections.
pub fn random_kgraph_min_codegree(
    n: usize,
    k: usize,
    p: f64,
    delta_min: usize,
    seed: u64,
    max_tries: u32,
) -> Result<Hypergraph> {
    for attempt in 0..max_tries {
        let mut rng = crate::rng::substream(seed, attempt as u64);
        let mut edges = Vec::new();
        for_each_combination(n, k, |c| {
            if rng.random::<f64>() < p {
                edges.push(c.iter().map(|&v| v as u32).collect());
            }
            true
        });
        let h = Hypergraph::new(k, n, edges)?;
        if h.min_degree(k - 1)? >= delta_min {
            return Ok(h);
        }
    }
    Err(Error::Precondition(format!(
        "no instance with min codegree {delta_min} in {max_tries} tries (n={n}, k={k}, p={p})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_query() {
        let parsed = Hypergraph::parse("3 4\n0 1 2\n0 1 3\n").unwrap();
        let h = parsed.graph;
        assert!(parsed.warnings.is_empty());
        assert_eq!((h.k(), h.n(), h.edge_count()), (3, 4, 2));
        assert!(h.contains_edge(&VSet::from_slice(&[0, 1, 2])));
        assert!(!h.contains_edge(&VSet::from_slice(&[1, 2, 3])));
        assert_eq!(h.codegree(&VSet::from_slice(&[0, 1])).unwrap(), 2);
    }

    #[test]
    fn parse_rejects_malformed() {
        // repeated vertex inside an edge
        assert!(matches!(
            Hypergraph::parse("3 4\n0 1 1\n"),
            Err(Error::BadEdge(..))
        ));
        // wrong arity
        assert!(Hypergraph::parse("3 4\n0 1\n").is_err());
        // out-of-range vertex
        assert!(matches!(
            Hypergraph::parse("3 4\n0 1 5\n"),
            Err(Error::VertexOutOfRange { .. })
        ));
        // missing header
        assert!(Hypergraph::parse("# nothing\n").is_err());
    }

    #[test]
    fn duplicate_policy() {
        let text = "3 5\n0 1 2\n2 1 0\n";
        let parsed = Hypergraph::parse(text).unwrap();
        assert_eq!(parsed.graph.edge_count(), 1);
        assert_eq!(parsed.warnings.len(), 1);
        assert!(matches!(
            Hypergraph::parse_strict(text),
            Err(Error::DuplicateEdge(_))
        ));
    }

    #[test]
    fn serializer_is_canonical() {
        let text = "# comment\n3 5\n2 4 3\n0 1 2\n";
        let h = Hypergraph::parse(text).unwrap().graph;
        assert_eq!(h.to_text(), "3 5\n0 1 2\n2 3 4\n");
        // round trip fixes: serialize(parse(t)) is idempotent
        let again = Hypergraph::parse(&h.to_text()).unwrap().graph;
        assert_eq!(again.to_text(), h.to_text());
    }

    #[test]
    fn complete_graph_degrees() {
        let h = complete_kgraph(6, 3).unwrap();
        assert_eq!(h.edge_count(), 20);
        // any 2-set lies in n−2 edges
        assert_eq!(h.codegree(&VSet::from_slice(&[1, 4])).unwrap(), 4);
        assert_eq!(h.min_degree(2).unwrap(), 4);
        assert_eq!(h.min_degree(1).unwrap(), binomial(5, 2) as usize);
    }

    #[test]
    fn empty_and_isolated() {
        let h = Hypergraph::new(3, 6, vec![]).unwrap();
        assert_eq!(h.codegree(&VSet::from_slice(&[0, 1])).unwrap(), 0);
        let h2 = Hypergraph::new(3, 5, vec![vec![0, 1, 2]]).unwrap();
        // vertex 4 isolated
        assert_eq!(h2.min_degree(1).unwrap(), 0);
    }

    #[test]
    fn codegree_matches_naive_scan() {
        let h = random_kgraph(10, 3, 0.4, 11).unwrap();
        let mut checked = 0;
        for_each_combination(10, 2, |c| {
            let s: VSet = c.iter().map(|&v| v as u32).collect();
            let naive = h.edge_sets().iter().filter(|e| s.is_subset_of(e)).count();
            assert_eq!(h.codegree(&s).unwrap(), naive);
            checked += 1;
            true
        });
        assert_eq!(checked, 45);
    }

    #[test]
    fn sparsify_endpoints_and_determinism() {
        let h = complete_kgraph(6, 3).unwrap();
        assert_eq!(h.sparsify(0.0, 5).unwrap().edge_count(), 0);
        assert_eq!(h.sparsify(1.0, 5).unwrap().edge_count(), 20);
        let a = h.sparsify(0.5, 42).unwrap();
        let b = h.sparsify(0.5, 42).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(h.sparsify(1.5, 0).is_err());
        // on ≥ 30 edges, distinct seeds give distinct subgraphs
        let big = complete_kgraph(7, 3).unwrap();
        assert!(big.edge_count() >= 30);
        for seed in 0..20 {
            assert_ne!(
                big.sparsify(0.5, seed).unwrap().to_text(),
                big.sparsify(0.5, seed + 1).unwrap().to_text()
            );
        }
    }

    #[test]
    fn min_degree_rejects_bad_orders() {
        let h = Hypergraph::new(4, 2, vec![]).unwrap();
        assert!(h.min_degree(0).is_err()); // order zero
        assert!(h.min_degree(4).is_err()); // order ≥ k
        assert!(h.min_degree(3).is_err()); // ℓ = 3 > n = 2
    }

    #[test]
    fn sparsify_mean_is_binomial() {
        // p = 0.5 on a 20-edge graph over many seeds: mean within 3σ of 10
        let h = complete_kgraph(6, 3).unwrap();
        let trials = 2000u64;
        let total: u64 = (0..trials)
            .map(|s| h.sparsify(0.5, s).unwrap().edge_count() as u64)
            .sum();
        let mean = total as f64 / trials as f64;
        let sigma = (20.0f64 * 0.25 / trials as f64).sqrt();
        assert!(
            (mean - 10.0).abs() < 3.0 * sigma,
            "mean {mean} too far from 10"
        );
    }

    #[test]
    fn barrier_shape() {
        let h = divisibility_barrier(6, 3, 3).unwrap();
        // edges meet X = {0,1,2} in 0 or 2 vertices: C(3,3) + C(3,2)*3 = 1 + 9
        assert_eq!(h.edge_count(), 10);
        for e in h.edge_sets() {
            let in_x = e.intersection(&VSet::from_slice(&[0, 1, 2])).len();
            assert_eq!(in_x % 2, 0);
        }
        assert!(divisibility_barrier(6, 3, 0).is_err());
        assert!(divisibility_barrier(6, 3, 6).is_err());
    }

    #[test]
    fn barrier_min_degree() {
        // n=12, x=5: δ₂ ≥ n/3 = 4, verified against the naive oracle
        let h = divisibility_barrier(12, 3, 5).unwrap();
        let mut naive_min = usize::MAX;
        for_each_combination(12, 2, |c| {
            let s: VSet = c.iter().map(|&v| v as u32).collect();
            naive_min = naive_min.min(h.edge_sets().iter().filter(|e| s.is_subset_of(e)).count());
            true
        });
        assert_eq!(h.min_degree(2).unwrap(), naive_min);
        assert!(naive_min >= 4);
    }

    #[test]
    fn min_codegree_sampler() {
        let h = random_kgraph_min_codegree(9, 3, 0.9, 4, 3, 50).unwrap();
        assert!(h.min_degree(2).unwrap() >= 4);
    }
}
