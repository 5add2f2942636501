//! Exact factor oracles and the sparsified perfect-matching decision
//! procedure.
//!
//! The oracles are plain backtracking over copies of the pattern, always
//! branching on the least-flexible uncovered vertex, with memoization on the
//! available vertex set. They are the ground truth every probabilistic claim
//! in this crate is tested against.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::RwLock;

use crate::bitset::VSet;
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::hypergraph::{binomial, Hypergraph};
use crate::partition::{compositions, IndexVector, VertexPartition};
use crate::pattern::PatternGraph;
use crate::robustness::RobustProfile;

/// Exact perfect-matching count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CountResult {
    pub count: u128,
    /// False when k does not divide n (count is 0 by definition).
    pub divisible: bool,
}

/// Number of perfect matchings, by backtracking on the uncovered vertex with
/// the fewest available edges, memoized on the uncovered set.
pub fn count_perfect_matchings(h: &Hypergraph) -> CountResult {
    count_perfect_matchings_on(h, h.vertex_set())
}

/// Exact perfect-matching count of the subgraph induced on `avail`.
pub fn count_perfect_matchings_on(h: &Hypergraph, avail: VSet) -> CountResult {
    if !avail.len().is_multiple_of(h.k()) {
        return CountResult {
            count: 0,
            divisible: false,
        };
    }
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); h.n()];
    for (i, e) in h.edges().iter().enumerate() {
        for &v in e {
            incidence[v as usize].push(i as u32);
        }
    }
    let mut memo: HashMap<VSet, u128> = HashMap::new();
    fn rec(
        h: &Hypergraph,
        incidence: &[Vec<u32>],
        avail: VSet,
        memo: &mut HashMap<VSet, u128>,
    ) -> u128 {
        if avail.is_empty() {
            return 1;
        }
        if let Some(&c) = memo.get(&avail) {
            return c;
        }
        // least-covered uncovered vertex
        let mut pivot = u32::MAX;
        let mut pivot_deg = usize::MAX;
        for v in avail.iter() {
            let deg = incidence[v as usize]
                .iter()
                .filter(|&&e| h.edge_sets()[e as usize].is_subset_of(&avail))
                .count();
            if deg < pivot_deg {
                pivot_deg = deg;
                pivot = v;
                if deg == 0 {
                    break;
                }
            }
        }
        let mut total = 0u128;
        if pivot_deg > 0 {
            for &e in &incidence[pivot as usize] {
                let es = h.edge_sets()[e as usize];
                if es.is_subset_of(&avail) {
                    total += rec(h, incidence, avail.minus(&es), memo);
                }
            }
        }
        memo.insert(avail, total);
        total
    }
    let count = rec(h, &incidence, avail, &mut memo);
    CountResult {
        count,
        divisible: true,
    }
}

/// Closed form for the complete k-graph: n! / ((k!)^{n/k} · (n/k)!).
pub fn complete_graph_pm_count(n: usize, k: usize) -> u128 {
    if !n.is_multiple_of(k) {
        return 0;
    }
    let fact = |m: usize| -> u128 { (1..=m as u128).product() };
    let mut denom: u128 = fact(n / k);
    for _ in 0..n / k {
        denom *= fact(k);
    }
    fact(n) / denom
}

/// A certified F-packing: pairwise disjoint r-sets, each spanning a copy.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PackingWitness {
    pub copies: Vec<VSet>,
}

impl PackingWitness {
    pub fn covered(&self) -> VSet {
        self.copies.iter().fold(VSet::empty(), |a, c| a.union(c))
    }

    /// Disjointness, spanning, and (optionally) exact cover of `cover`.
    pub fn validate(&self, h: &Hypergraph, f: &PatternGraph, cover: Option<&VSet>) -> bool {
        let mut seen = VSet::empty();
        for c in &self.copies {
            if c.len() != f.r() || !seen.is_disjoint(c) || !f.spans(h, c) {
                return false;
            }
            seen = seen.union(c);
        }
        cover.is_none_or(|want| seen == *want)
    }
}

/// Memoizing existence oracle for perfect F-packings of induced subgraphs.
/// Reads are shared; insertion is serialized behind the lock.
pub struct FactorOracle<'h> {
    h: &'h Hypergraph,
    f: PatternGraph,
    copy_sets: Vec<VSet>,
    incidence: Vec<Vec<u32>>,
    memo: RwLock<HashMap<VSet, bool>>,
}

impl<'h> FactorOracle<'h> {
    pub fn new(h: &'h Hypergraph, f: &PatternGraph) -> FactorOracle<'h> {
        let copy_sets = f.copy_sets_within(h, &h.vertex_set());
        let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); h.n()];
        for (i, c) in copy_sets.iter().enumerate() {
            for v in c.iter() {
                incidence[v as usize].push(i as u32);
            }
        }
        FactorOracle {
            h,
            f: f.clone(),
            copy_sets,
            incidence,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.f
    }

    pub fn host(&self) -> &Hypergraph {
        self.h
    }

    /// Does H[avail] admit a perfect F-packing?
    pub fn has_factor_on(&self, avail: &VSet) -> bool {
        if !avail.len().is_multiple_of(self.f.r()) {
            return false;
        }
        if avail.is_empty() {
            return true;
        }
        if let Some(&v) = self.memo.read().expect("poisoned").get(avail) {
            return v;
        }
        let result = self.search(avail, &mut None);
        self.memo.write().expect("poisoned").insert(*avail, result);
        result
    }

    /// Like [`has_factor_on`](Self::has_factor_on) but returns the packing.
    pub fn find_factor_on(&self, avail: &VSet) -> Option<PackingWitness> {
        if !avail.len().is_multiple_of(self.f.r()) {
            return None;
        }
        let mut picked = Some(Vec::new());
        if self.search(avail, &mut picked) {
            Some(PackingWitness {
                copies: picked.unwrap(),
            })
        } else {
            None
        }
    }

    fn search(&self, avail: &VSet, picked: &mut Option<Vec<VSet>>) -> bool {
        if avail.is_empty() {
            return true;
        }
        if let Some(&known) = self.memo.read().expect("poisoned").get(avail) {
            if !known {
                return false;
            }
            // known-true with a witness requested still needs the descent
            if picked.is_none() {
                return true;
            }
        }
        // least-flexible uncovered vertex
        let mut pivot = u32::MAX;
        let mut best = usize::MAX;
        for v in avail.iter() {
            let cnt = self.incidence[v as usize]
                .iter()
                .filter(|&&c| self.copy_sets[c as usize].is_subset_of(avail))
                .count();
            if cnt < best {
                best = cnt;
                pivot = v;
                if cnt == 0 {
                    break;
                }
            }
        }
        if best == 0 {
            self.memo.write().expect("poisoned").insert(*avail, false);
            return false;
        }
        for &c in &self.incidence[pivot as usize] {
            let cs = self.copy_sets[c as usize];
            if cs.is_subset_of(avail) {
                if let Some(p) = picked.as_mut() {
                    p.push(cs);
                }
                if self.search(&avail.minus(&cs), picked) {
                    self.memo.write().expect("poisoned").insert(*avail, true);
                    return true;
                }
                if let Some(p) = picked.as_mut() {
                    p.pop();
                }
            }
        }
        self.memo.write().expect("poisoned").insert(*avail, false);
        false
    }
}

/// Search for a perfect F-packing of the whole host.
pub fn has_f_factor(h: &Hypergraph, f: &PatternGraph) -> Option<PackingWitness> {
    FactorOracle::new(h, f).find_factor_on(&h.vertex_set())
}

/// Deterministic backtracking for a matching with one edge per required
/// index vector, avoiding `forbidden`. Returns edge ids in canonical order
/// of the requirement list.
pub fn find_matching_with_vectors(
    h: &Hypergraph,
    p: &VertexPartition,
    required: &[IndexVector],
    forbidden: &VSet,
) -> Option<Vec<usize>> {
    let buckets = bucket_edges(h, p);
    let mut req = required.to_vec();
    req.sort();
    let mut picked = Vec::new();
    let mut used = *forbidden;
    if fill_vectors(h, &buckets, &req, 0, 0, &mut used, &mut picked) {
        Some(picked)
    } else {
        None
    }
}

fn bucket_edges(h: &Hypergraph, p: &VertexPartition) -> BTreeMap<IndexVector, Vec<usize>> {
    let mut buckets: BTreeMap<IndexVector, Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edge_sets().iter().enumerate() {
        buckets.entry(p.index_vector(e)).or_default().push(i);
    }
    buckets
}

fn fill_vectors(
    h: &Hypergraph,
    buckets: &BTreeMap<IndexVector, Vec<usize>>,
    req: &[IndexVector],
    pos: usize,
    min_edge: usize,
    used: &mut VSet,
    picked: &mut Vec<usize>,
) -> bool {
    if pos == req.len() {
        return true;
    }
    let Some(candidates) = buckets.get(&req[pos]) else {
        return false;
    };
    // identical consecutive vectors must pick increasing edge ids
    let lo = if pos > 0 && req[pos - 1] == req[pos] {
        min_edge
    } else {
        0
    };
    for &e in candidates.iter().filter(|&&e| e >= lo) {
        let es = h.edge_sets()[e];
        if es.is_disjoint(used) {
            picked.push(e);
            let saved = *used;
            *used = used.union(&es);
            if fill_vectors(h, buckets, req, pos + 1, e + 1, used, picked) {
                return true;
            }
            *used = saved;
            picked.pop();
        }
    }
    false
}

/// Search for an F-packing M with |M| ≤ q whose removal leaves an index
/// vector inside `lattice`. Residue-guided: multisets of achievable copy
/// vectors are enumerated first (smallest size, then lexicographic), and
/// only lattice-compatible multisets are handed to the disjointness
/// backtracking. Returns the smallest witness found.
pub fn find_q_solution(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
    lattice: &crate::lattice::IntegerLattice,
    q: usize,
) -> Result<Option<PackingWitness>> {
    let total = p.total_vector();
    if total.weight() % f.r() as i64 != 0 {
        return Ok(None);
    }
    // bucket copy sets by index vector
    let mut buckets: BTreeMap<IndexVector, Vec<VSet>> = BTreeMap::new();
    for c in f.copy_sets_within(h, &h.vertex_set()) {
        buckets.entry(p.index_vector(&c)).or_default().push(c);
    }
    let available: Vec<IndexVector> = buckets.keys().cloned().collect();
    for size in 0..=q {
        let mut multiset = Vec::new();
        if let Some(w) = try_multisets(
            lattice,
            &total,
            &available,
            &buckets,
            size,
            0,
            &mut multiset,
        )? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn try_multisets(
    lattice: &crate::lattice::IntegerLattice,
    total: &IndexVector,
    available: &[IndexVector],
    buckets: &BTreeMap<IndexVector, Vec<VSet>>,
    remaining: usize,
    from: usize,
    multiset: &mut Vec<IndexVector>,
) -> Result<Option<PackingWitness>> {
    if remaining == 0 {
        let sum = multiset
            .iter()
            .fold(IndexVector::zero(total.dim()), |a, v| a.add(v));
        let leftover = total.sub(&sum);
        if !leftover.is_nonneg() || !lattice.contains(&leftover)? {
            return Ok(None);
        }
        let mut copies = Vec::new();
        let mut used = VSet::empty();
        if realize_copies(buckets, multiset, 0, 0, &mut used, &mut copies) {
            return Ok(Some(PackingWitness { copies }));
        }
        return Ok(None);
    }
    for i in from..available.len() {
        multiset.push(available[i].clone());
        if let Some(w) = try_multisets(
            lattice,
            total,
            available,
            buckets,
            remaining - 1,
            i,
            multiset,
        )? {
            return Ok(Some(w));
        }
        multiset.pop();
    }
    Ok(None)
}

fn realize_copies(
    buckets: &BTreeMap<IndexVector, Vec<VSet>>,
    multiset: &[IndexVector],
    pos: usize,
    min_idx: usize,
    used: &mut VSet,
    copies: &mut Vec<VSet>,
) -> bool {
    if pos == multiset.len() {
        return true;
    }
    let Some(candidates) = buckets.get(&multiset[pos]) else {
        return false;
    };
    let lo = if pos > 0 && multiset[pos - 1] == multiset[pos] {
        min_idx
    } else {
        0
    };
    for (i, c) in candidates.iter().enumerate().skip(lo) {
        if c.is_disjoint(used) {
            copies.push(*c);
            let saved = *used;
            *used = used.union(c);
            if realize_copies(buckets, multiset, pos + 1, i + 1, used, copies) {
                return true;
            }
            *used = saved;
            copies.pop();
        }
    }
    false
}

/// Answers presence-in-the-sparsification queries for single edges.
pub trait EdgeOracle {
    fn contains(&mut self, edge: &VSet) -> Result<bool>;
}

/// Oracle backed by a concrete Bernoulli sparsification of the host,
/// using the host's canonical keep decisions for `(p, seed)`.
pub struct SparsifiedOracle {
    present: HashSet<VSet>,
}

impl SparsifiedOracle {
    pub fn new(h: &Hypergraph, p: f64, seed: u64) -> Result<SparsifiedOracle> {
        let keep = h.sparsify_mask(p, seed)?;
        let present = h
            .edge_sets()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        Ok(SparsifiedOracle { present })
    }

    pub fn present_count(&self) -> usize {
        self.present.len()
    }
}

impl EdgeOracle for SparsifiedOracle {
    fn contains(&mut self, edge: &VSet) -> Result<bool> {
        Ok(self.present.contains(edge))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

/// Outcome of the decision procedure, with the full reveal trace.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    /// Accepting matching in the sparsification (edges as sorted lists).
    pub witness: Option<Vec<Vec<u32>>>,
    /// On rejection, the exhausted search: every lattice-compatible vector
    /// multiset that was tried.
    pub certificate: Option<RejectCertificate>,
    /// Edges queried against the sparsification oracle, in query order.
    /// Never contains an edge whose index vector is η-robust.
    pub revealed_edges: Vec<Vec<u32>>,
    pub vector_sets_tried: usize,
    pub extension: Option<ExtensionReport>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RejectCertificate {
    pub candidate_vector_sets: Vec<Vec<IndexVector>>,
}

/// Result of greedily extending the accepting matching across η-robust
/// vectors (revealed separately from the core run).
#[derive(Clone, Debug, serde::Serialize)]
pub struct ExtensionReport {
    pub extended_matching: Vec<Vec<u32>>,
    pub reveals: usize,
    /// Index vector of the uncovered remainder lies in the robust lattice.
    pub remainder_in_lattice: bool,
    pub warning: Option<String>,
}

/// Parameters for [`procedure_perfect_matching`].
pub struct ProcedureParams {
    pub eta: Frac,
    /// Run the greedy η-robust extension after an accept.
    pub extend: bool,
    /// Cap on η-robust reveals per needed vector during extension; defaults
    /// to ceil(η·n^k) when `None`.
    pub extension_reveal_cap: Option<usize>,
}

/// The sparsified perfect-matching decision procedure.
///
/// For every multiset of at most k−1 edge vectors whose removal from the
/// total index vector lands in the robust lattice (smallest multiset first,
/// lexicographic within a size), the non-η-robust part of the multiset is
/// searched in the sparsification, querying the oracle only for edges with
/// non-η-robust vectors. The first realized multiset accepts; exhaustion
/// rejects. Preconditions (k | n, the codegree floor) are the caller's.
pub fn procedure_perfect_matching(
    h: &Hypergraph,
    p: &VertexPartition,
    profile: &RobustProfile,
    params: &ProcedureParams,
    oracle: &mut dyn EdgeOracle,
) -> Result<DecisionOutcome> {
    let k = h.k();
    let d = p.d();
    let n = h.n();
    if !n.is_multiple_of(k) {
        return Err(Error::Precondition(format!("k = {k} must divide n = {n}")));
    }
    let lattice = profile.lattice()?;
    let eta_threshold = params.eta.ceil_mul((n as u128).pow(k as u32));
    let eta_robust: HashSet<IndexVector> = profile
        .raw_counts
        .iter()
        .filter(|(_, &c)| c >= eta_threshold)
        .map(|(v, _)| v.clone())
        .collect();

    // edges bucketed by vector, restricted to non-η-robust vectors: the only
    // edges the oracle may ever be asked about
    let mut queryable: BTreeMap<IndexVector, Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edge_sets().iter().enumerate() {
        let vec = p.index_vector(e);
        if !eta_robust.contains(&vec) {
            queryable.entry(vec).or_default().push(i);
        }
    }

    let total = p.total_vector();
    let all_vectors = compositions(d, k as i64);
    let mut revealed: Vec<usize> = Vec::new();
    let mut revealed_set: HashSet<usize> = HashSet::new();
    let mut present_cache: HashMap<usize, bool> = HashMap::new();
    let mut tried: Vec<Vec<IndexVector>> = Vec::new();

    for size in 0..k {
        let mut stack = Vec::new();
        let found = enum_multisets(&all_vectors, size, 0, &mut stack, &mut |multiset| {
            let sum = multiset.iter().fold(IndexVector::zero(d), |a, v| a.add(v));
            let leftover = total.sub(&sum);
            // a negative coordinate means the multiset exceeds a part's
            // capacity: no disjoint realization can exist
            if !leftover.is_nonneg() || !lattice.contains(&leftover)? {
                return Ok(None);
            }
            tried.push(multiset.to_vec());
            let needed: Vec<IndexVector> = multiset
                .iter()
                .filter(|v| !eta_robust.contains(v))
                .cloned()
                .collect();
            let mut picked = Vec::new();
            let mut used = VSet::empty();
            let ok = search_sparsified(
                h,
                &queryable,
                &needed,
                0,
                0,
                &mut used,
                &mut picked,
                oracle,
                &mut revealed,
                &mut revealed_set,
                &mut present_cache,
            )?;
            Ok(ok.then(|| (multiset.to_vec(), picked)))
        })?;

        if let Some((multiset, matching)) = found {
            let witness: Vec<Vec<u32>> = matching.iter().map(|&e| h.edges()[e].clone()).collect();
            let extension = if params.extend {
                let robust_part: Vec<IndexVector> = multiset
                    .iter()
                    .filter(|v| eta_robust.contains(v))
                    .cloned()
                    .collect();
                Some(extend_matching(
                    h,
                    p,
                    &matching,
                    &robust_part,
                    eta_threshold,
                    params.extension_reveal_cap,
                    &lattice,
                    oracle,
                )?)
            } else {
                None
            };
            return Ok(DecisionOutcome {
                verdict: Verdict::Accept,
                witness: Some(witness),
                certificate: None,
                revealed_edges: revealed.iter().map(|&e| h.edges()[e].clone()).collect(),
                vector_sets_tried: tried.len(),
                extension,
            });
        }
    }

    Ok(DecisionOutcome {
        verdict: Verdict::Reject,
        witness: None,
        certificate: Some(RejectCertificate {
            candidate_vector_sets: tried.clone(),
        }),
        revealed_edges: revealed.iter().map(|&e| h.edges()[e].clone()).collect(),
        vector_sets_tried: tried.len(),
        extension: None,
    })
}

/// Enumerate non-decreasing multisets of `vectors` of the given size,
/// invoking `f` on each until it returns Some.
fn enum_multisets<T>(
    vectors: &[IndexVector],
    size: usize,
    from: usize,
    stack: &mut Vec<IndexVector>,
    f: &mut impl FnMut(&[IndexVector]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if stack.len() == size {
        return f(stack);
    }
    for i in from..vectors.len() {
        stack.push(vectors[i].clone());
        if let Some(out) = enum_multisets(vectors, size, i, stack, f)? {
            return Ok(Some(out));
        }
        stack.pop();
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search_sparsified(
    h: &Hypergraph,
    queryable: &BTreeMap<IndexVector, Vec<usize>>,
    needed: &[IndexVector],
    pos: usize,
    min_edge: usize,
    used: &mut VSet,
    picked: &mut Vec<usize>,
    oracle: &mut dyn EdgeOracle,
    revealed: &mut Vec<usize>,
    revealed_set: &mut HashSet<usize>,
    present_cache: &mut HashMap<usize, bool>,
) -> Result<bool> {
    if pos == needed.len() {
        return Ok(true);
    }
    let Some(candidates) = queryable.get(&needed[pos]) else {
        return Ok(false);
    };
    let lo = if pos > 0 && needed[pos - 1] == needed[pos] {
        min_edge
    } else {
        0
    };
    for &e in candidates.iter().filter(|&&e| e >= lo) {
        let es = h.edge_sets()[e];
        if !es.is_disjoint(used) {
            continue;
        }
        let present = match present_cache.get(&e) {
            Some(&v) => v,
            None => {
                let v = oracle
                    .contains(&es)
                    .map_err(|err| Error::Oracle(err.to_string()))?;
                if revealed_set.insert(e) {
                    revealed.push(e);
                }
                present_cache.insert(e, v);
                v
            }
        };
        if !present {
            continue;
        }
        picked.push(e);
        let saved = *used;
        *used = used.union(&es);
        if search_sparsified(
            h,
            queryable,
            needed,
            pos + 1,
            e + 1,
            used,
            picked,
            oracle,
            revealed,
            revealed_set,
            present_cache,
        )? {
            return Ok(true);
        }
        *used = saved;
        picked.pop();
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn extend_matching(
    h: &Hypergraph,
    p: &VertexPartition,
    core: &[usize],
    robust_vectors_needed: &[IndexVector],
    eta_threshold: u128,
    cap_override: Option<usize>,
    lattice: &crate::lattice::IntegerLattice,
    oracle: &mut dyn EdgeOracle,
) -> Result<ExtensionReport> {
    let cap = cap_override.unwrap_or(eta_threshold as usize);
    let mut matching: Vec<usize> = core.to_vec();
    let mut covered = core
        .iter()
        .fold(VSet::empty(), |a, &e| a.union(&h.edge_sets()[e]));
    let mut reveals = 0usize;
    let mut warning = None;
    // per-vector reveal cursor so repeated occurrences share the prefix
    let mut cursors: HashMap<IndexVector, usize> = HashMap::new();
    let mut spent: HashMap<IndexVector, usize> = HashMap::new();
    let mut buckets: BTreeMap<IndexVector, Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edge_sets().iter().enumerate() {
        buckets.entry(p.index_vector(e)).or_default().push(i);
    }
    'vectors: for v in robust_vectors_needed {
        let Some(candidates) = buckets.get(v) else {
            warning = Some(format!("no edges with vector {v:?}"));
            continue;
        };
        let cursor = cursors.entry(v.clone()).or_insert(0);
        let used = spent.entry(v.clone()).or_insert(0);
        while *cursor < candidates.len() && *used < cap {
            let e = candidates[*cursor];
            *cursor += 1;
            *used += 1;
            reveals += 1;
            let es = h.edge_sets()[e];
            let present = oracle
                .contains(&es)
                .map_err(|err| Error::Oracle(err.to_string()))?;
            if present && es.is_disjoint(&covered) {
                matching.push(e);
                covered = covered.union(&es);
                continue 'vectors;
            }
        }
        warning = Some(format!(
            "extension exhausted reveal budget for vector {v:?}"
        ));
    }
    let remainder = h.vertex_set().minus(&covered);
    let remainder_in_lattice = lattice.contains(&p.index_vector(&remainder))?;
    Ok(ExtensionReport {
        extended_matching: matching.iter().map(|&e| h.edges()[e].clone()).collect(),
        reveals,
        remainder_in_lattice,
        warning,
    })
}

/// Threshold scaling as a symbolic pair: the sparsification threshold is
/// `n^{-exponent} · (log n)^{log_power}` up to a constant.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ThresholdScale {
    /// Positive rational e with p ≍ n^{−e} · polylog.
    pub n_exponent: Frac,
    pub log_power: Frac,
}

/// Density parameters of a pattern: per-subgraph densities e/(v−1), their
/// maximum m₁, strict 1-balancedness, and the factor-threshold scaling.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DensityParams {
    pub d1: Frac,
    pub m1: Frac,
    pub e_f: usize,
    pub strictly_1_balanced: bool,
    /// (vertex subset, density) for every induced subgraph on ≥ 2 vertices.
    pub subgraph_densities: Vec<(Vec<u32>, Frac)>,
    pub threshold: ThresholdScale,
}

/// Exhaustive subgraph-density computation for patterns with ≤ 20 vertices.
/// Densities of non-induced subgraphs are dominated by induced ones, so
/// enumerating vertex subsets is exhaustive for the maximum.
pub fn density_params(f: &PatternGraph) -> Result<DensityParams> {
    let r = f.r();
    if r < 2 {
        return Err(Error::InvalidSizes(
            "pattern needs at least 2 vertices".into(),
        ));
    }
    if r > 20 {
        return Err(Error::InvalidSizes(format!(
            "pattern order {r} too large to enumerate"
        )));
    }
    let e_f = f.edge_count();
    let d1 = Frac::new(e_f as u64, (r - 1) as u64)?;
    let mut densities = Vec::new();
    let mut m1 = Frac::ZERO;
    let mut strictly = e_f > 0;
    for mask in 1u32..(1 << r) {
        let w: Vec<u32> = (0..r as u32).filter(|&v| (mask >> v) & 1 == 1).collect();
        if w.len() < 2 {
            continue;
        }
        let ws = VSet::from_slice(&w);
        let edges_inside = f
            .edges()
            .iter()
            .filter(|e| e.iter().all(|&v| ws.contains(v)))
            .count();
        let dens = Frac::new(edges_inside as u64, (w.len() - 1) as u64)?;
        if dens > m1 {
            m1 = dens;
        }
        if w.len() < r && dens >= d1 {
            strictly = false;
        }
        densities.push((w, dens));
    }
    // proper subgraphs on the full vertex set have fewer edges, hence
    // strictly smaller density; no extra check needed
    let threshold = ThresholdScale {
        n_exponent: Frac::new(m1.den(), m1.num().max(1))?,
        log_power: if strictly {
            Frac::new(1, e_f.max(1) as u64)?
        } else {
            Frac::ONE
        },
    };
    Ok(DensityParams {
        d1,
        m1,
        e_f,
        strictly_1_balanced: strictly,
        subgraph_densities: densities,
        threshold,
    })
}

/// The quotient-size bound usable by the solubility search: the number of
/// parts when the degree floor n/k and the part-size floor both hold, and
/// the count of k-vectors C(d+k−1, k) otherwise.
pub fn solubility_bound(
    h: &Hypergraph,
    p: &VertexPartition,
    min_part_fraction: Frac,
) -> Result<usize> {
    let k = h.k();
    let d = p.d();
    let degree_ok =
        Frac::new(1, k as u64)?.count_at_least(h.min_degree(k - 1)? as u128, h.n() as u128);
    let parts_ok = p
        .parts()
        .iter()
        .all(|part| min_part_fraction.count_at_least(part.len() as u128, h.n() as u128));
    Ok(if degree_ok && parts_ok {
        d
    } else {
        binomial(d + k - 1, k) as usize
    })
}
