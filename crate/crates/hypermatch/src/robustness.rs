//! Robust index vectors, per-vertex robust links, reachability counting, and
//! the partition builder/verifier.
//!
//! A vector is μ-robust when at least ceil(μ·n^r) copies of the pattern
//! carry it. Two vertices are (β,i)-reachable when at least β·n^{ir−1}
//! swap sets S make both S∪{u} and S∪{v} factorable. The builder produces a
//! partition whose parts are reachability-merged and whose vertices all keep
//! many robust links; the verifier certifies those properties exactly where
//! enumeration is affordable and by sampling elsewhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;

use crate::bitset::VSet;
use crate::decision::FactorOracle;
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::hypergraph::{binomial, for_each_combination, Hypergraph};
use crate::lattice::IntegerLattice;
use crate::partition::{IndexVector, VertexPartition};
use crate::pattern::PatternGraph;

/// Copy counts per index vector, the μ-robust vector set, and per-vertex
/// counts of r-sets spanning a robust copy.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RobustProfile {
    pub mu: Frac,
    /// ceil(μ · n^r), the robustness cutoff in exact arithmetic.
    pub threshold: u128,
    pub raw_counts: BTreeMap<IndexVector, u128>,
    pub robust_vectors: Vec<IndexVector>,
    /// For each vertex, the number of r-sets containing it that span at
    /// least one copy with a robust index vector.
    pub link_counts: Vec<u64>,
    pub dim: usize,
    pub r: usize,
}

impl RobustProfile {
    /// The integer lattice generated by the robust vectors.
    pub fn lattice(&self) -> Result<IntegerLattice> {
        IntegerLattice::from_generators(self.dim, &self.robust_vectors)
    }

    pub fn is_robust(&self, v: &IndexVector) -> bool {
        self.raw_counts.get(v).is_some_and(|&c| c >= self.threshold)
    }
}

/// Exact robustness profile by enumeration of spanning r-sets.
pub fn robust_profile(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
    mu: Frac,
) -> Result<RobustProfile> {
    if p.n() != h.n() {
        return Err(Error::InvalidSizes(
            "partition host differs from hypergraph".into(),
        ));
    }
    if mu.is_zero() {
        return Err(Error::BadFraction("mu must be positive".into()));
    }
    let n = h.n();
    let r = f.r();
    let threshold = mu.ceil_mul((n as u128).pow(r as u32));
    let mut raw: BTreeMap<IndexVector, u128> = BTreeMap::new();
    let mut spanning: Vec<(VSet, IndexVector)> = Vec::new();
    if f.is_single_edge() {
        for e in h.edge_sets() {
            let v = p.index_vector(e);
            *raw.entry(v.clone()).or_default() += 1;
            spanning.push((*e, v));
        }
    } else {
        for_each_combination(n, r, |c| {
            let s: VSet = c.iter().map(|&v| v as u32).collect();
            let copies = f.copies_on(h, &s);
            if copies > 0 {
                let v = p.index_vector(&s);
                *raw.entry(v.clone()).or_default() += copies as u128;
                spanning.push((s, v));
            }
            true
        });
    }
    let robust: BTreeSet<IndexVector> = raw
        .iter()
        .filter(|(_, &c)| c >= threshold)
        .map(|(v, _)| v.clone())
        .collect();
    let mut link_counts = vec![0u64; n];
    for (s, v) in &spanning {
        if robust.contains(v) {
            for x in s.iter() {
                link_counts[x as usize] += 1;
            }
        }
    }
    Ok(RobustProfile {
        mu,
        threshold,
        raw_counts: raw,
        robust_vectors: robust.into_iter().collect(),
        link_counts,
        dim: p.d(),
        r,
    })
}

/// Number of (i·r−1)-sets S ⊆ V∖{u,v} with both S∪{u} and S∪{v} factorable.
pub fn reachable_count(oracle: &FactorOracle, u: u32, v: u32, i: usize) -> Result<u64> {
    let h = oracle.host();
    let r = oracle.pattern().r();
    if u == v {
        return Err(Error::Precondition(
            "reachability needs two distinct vertices".into(),
        ));
    }
    if i == 0 {
        return Err(Error::Precondition(
            "reachability level must be at least 1".into(),
        ));
    }
    let size = i * r - 1;
    if size + 2 > h.n() {
        return Err(Error::InvalidSizes(format!(
            "swap sets of size {size} do not fit in {} vertices",
            h.n()
        )));
    }
    let pool: Vec<u32> = h.vertex_set().without(u).without(v).to_vec();
    let mut count = 0u64;
    for_each_combination(pool.len(), size, |c| {
        let s: VSet = c.iter().map(|&ix| pool[ix]).collect();
        if oracle.has_factor_on(&s.with(u)) && oracle.has_factor_on(&s.with(v)) {
            count += 1;
        }
        true
    });
    Ok(count)
}

/// The cheap 1-reachability surrogate: are there at least α·C(n,k−1)
/// common-neighborhood (k−1)-sets S with |N(S)| ≥ α·n?
pub fn lo_markstrom_test(h: &Hypergraph, u: u32, v: u32, alpha: Frac) -> Result<bool> {
    if u == v {
        return Err(Error::Precondition(
            "pair test needs two distinct vertices".into(),
        ));
    }
    let k = h.k();
    let n = h.n();
    let pool: Vec<u32> = h.vertex_set().without(u).without(v).to_vec();
    let mut count = 0u128;
    for_each_combination(pool.len(), k - 1, |c| {
        let s: VSet = c.iter().map(|&ix| pool[ix]).collect();
        if h.contains_edge(&s.with(u)) && h.contains_edge(&s.with(v)) {
            let link = h.link(&s).len();
            if alpha.count_at_least(link as u128, n as u128) {
                count += 1;
            }
        }
        true
    });
    Ok(alpha.count_at_least(count, binomial(n, k - 1)))
}

/// A partition annotated with the closedness constants it targets.
#[derive(Clone, Debug)]
pub struct GoodPartition {
    pub partition: VertexPartition,
    pub beta: Frac,
    pub t: usize,
    pub min_part_fraction: Frac,
    pub certificates: Option<VerifyReport>,
}

/// Tuning for [`build_partition`]. `defaults(gamma, k)` mirrors the
/// documented experiment defaults: α = 1/k + γ, μ = 1/1000, ε = 1/100,
/// β₁ = 1/1000, merge fraction 1/2, part floor 1/k + γ/3. Exact level-1
/// reachability is the default pair test: it is affordable at oracle scale
/// and it certifies on instances (such as parity barriers at δ = n/k) where
/// the cheap surrogate's degree hypothesis fails.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BuildParams {
    pub alpha: Frac,
    pub beta1: Frac,
    pub mu: Frac,
    pub epsilon: Frac,
    /// Fraction of reachable cross pairs required to merge two parts.
    pub rho: Frac,
    /// Part-size floor c′ as a fraction of n.
    pub min_part_fraction: Frac,
    /// Replace the cheap pair test by exact level-1 reachability counting.
    pub exact_reachability: bool,
    /// Witness (r−1)-sets required of a relocation target.
    pub relocation_min_sets: u64,
    /// Closedness constants recorded for the verifier.
    pub beta: Frac,
    pub t: usize,
}

impl BuildParams {
    pub fn defaults(gamma: Frac, k: usize) -> Result<BuildParams> {
        let inv_k = Frac::new(1, k as u64)?;
        Ok(BuildParams {
            alpha: inv_k.add(gamma)?,
            beta1: Frac::new(1, 1000)?,
            mu: Frac::new(1, 1000)?,
            epsilon: Frac::new(1, 100)?,
            rho: Frac::new(1, 2)?,
            min_part_fraction: inv_k.add(gamma.mul(Frac::new(1, 3)?)?)?,
            exact_reachability: true,
            relocation_min_sets: 1,
            beta: Frac::new(1, 1000)?,
            t: 1,
        })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BuildDiagnostics {
    /// Vertices that fell below the 2ε robust-link floor before relocation.
    pub weak_vertices: Vec<u32>,
    /// (vertex, destination part) relocations applied.
    pub relocations: Vec<(u32, usize)>,
    /// Part count after reachability merging, before relocation.
    pub merged_parts: usize,
    /// Parts left below the ceil(c′·n) floor (kept, not force-merged).
    pub undersized_parts: usize,
    /// Minimum robust-link count under the final partition (at μ/2).
    pub final_link_floor: u64,
    /// μ used for the final profile (half the build μ).
    pub final_mu: Frac,
}

pub struct BuildOutcome {
    pub good: GoodPartition,
    /// Profile of the final partition at μ/2.
    pub profile: RobustProfile,
    pub diagnostics: BuildDiagnostics,
}

/// Build a partition in three stages: reachability merging over a pairwise
/// test, a robustness profile locating vertices with too few robust links,
/// and relocation of those vertices to parts where a robust vector leaves
/// them many witness sets.
pub fn build_partition(
    h: &Hypergraph,
    f: &PatternGraph,
    params: &BuildParams,
) -> Result<BuildOutcome> {
    let n = h.n();
    let r = f.r();
    if n < 2 {
        return Err(Error::InvalidSizes("host too small".into()));
    }

    // stage 1: pairwise reachability and part merging
    let oracle = FactorOracle::new(h, f);
    let beta1_floor = params
        .beta1
        .ceil_mul((n as u128).pow((r - 1) as u32))
        .max(1);
    let mut reach = vec![vec![false; n]; n];
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            let ok = if params.exact_reachability {
                reachable_count(&oracle, u, v, 1)? as u128 >= beta1_floor
            } else {
                lo_markstrom_test(h, u, v, params.alpha)?
            };
            reach[u as usize][v as usize] = ok;
            reach[v as usize][u as usize] = ok;
        }
    }
    let mut parts: Vec<VSet> = (0..n as u32).map(VSet::singleton).collect();
    loop {
        let mut best: Option<(usize, usize, u128, u128)> = None;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let mut good = 0u128;
                let mut total = 0u128;
                for a in parts[i].iter() {
                    for b in parts[j].iter() {
                        total += 1;
                        good += reach[a as usize][b as usize] as u128;
                    }
                }
                if params.rho.count_at_least(good, total)
                    && good > 0
                    && best.is_none_or(|(_, _, bg, bt)| good * bt > bg * total)
                {
                    best = Some((i, j, good, total));
                }
            }
        }
        let Some((i, j, _, _)) = best else { break };
        let merged = parts[i].union(&parts[j]);
        parts[i] = merged;
        parts.remove(j);
    }
    parts.sort_by_key(|p| p.first());
    let merged_parts = parts.len();

    // parts below the floor are kept, never force-merged: merging past the
    // ρ rule would pool unreachable vertices and break the partition's
    // meaning on sub-threshold instances. The count is surfaced instead.
    let min_size = params.min_part_fraction.ceil_mul(n as u128) as usize;
    let undersized = parts.iter().filter(|p| p.len() < min_size).count();
    let stage1 = VertexPartition::from_parts(n, &parts)?;

    // stage 2: robust profile and weak vertices
    let profile = robust_profile(h, f, &stage1, params.mu)?;
    let weak_floor = params
        .epsilon
        .mul(Frac::new(2, 1)?)?
        .ceil_mul((n as u128).pow((r - 1) as u32));
    let weak: Vec<u32> = (0..n as u32)
        .filter(|&v| (profile.link_counts[v as usize] as u128) < weak_floor)
        .collect();

    // stage 3: relocate each weak vertex to the smallest part index where
    // some robust vector leaves it enough witness (r−1)-sets
    let robust: BTreeSet<&IndexVector> = profile.robust_vectors.iter().collect();
    let mut relocations = Vec::new();
    let mut assignment = stage1.assignment().to_vec();
    for &v in &weak {
        // witness counts per (r−1)-set vector
        let mut by_vec: HashMap<IndexVector, u64> = HashMap::new();
        let pool: Vec<u32> = h.vertex_set().without(v).to_vec();
        if f.is_single_edge() {
            for e in h.edge_sets() {
                if e.contains(v) {
                    *by_vec
                        .entry(stage1.index_vector(&e.without(v)))
                        .or_default() += 1;
                }
            }
        } else {
            for_each_combination(pool.len(), r - 1, |c| {
                let s: VSet = c.iter().map(|&ix| pool[ix]).collect();
                if f.spans(h, &s.with(v)) {
                    *by_vec.entry(stage1.index_vector(&s)).or_default() += 1;
                }
                true
            });
        }
        let mut target = None;
        for i in 0..stage1.d() {
            let unit = IndexVector::unit(stage1.d(), i);
            let witnesses = robust
                .iter()
                .filter_map(|w| by_vec.get(&w.sub(&unit)))
                .copied()
                .max()
                .unwrap_or(0);
            if witnesses >= params.relocation_min_sets {
                target = Some(i);
                break;
            }
        }
        let Some(i) = target else {
            return Err(Error::RelocationFailed { vertex: v });
        };
        if assignment[v as usize] != i as u32 {
            assignment[v as usize] = i as u32;
            relocations.push((v, i));
        }
    }
    // relocation may drain a junk part entirely; drop empty parts and
    // renumber (relocation targets recorded above keep stage-1 indices)
    let mut live: Vec<u32> = assignment.clone();
    live.sort_unstable();
    live.dedup();
    let assignment: Vec<u32> = assignment
        .iter()
        .map(|p| live.iter().position(|x| x == p).expect("member") as u32)
        .collect();
    let final_partition = VertexPartition::new(n, assignment)?;

    let final_mu = params.mu.mul(Frac::new(1, 2)?)?;
    let final_profile = robust_profile(h, f, &final_partition, final_mu)?;
    let final_link_floor = final_profile.link_counts.iter().copied().min().unwrap_or(0);

    Ok(BuildOutcome {
        good: GoodPartition {
            partition: final_partition,
            beta: params.beta,
            t: params.t,
            min_part_fraction: params.min_part_fraction,
            certificates: None,
        },
        profile: final_profile,
        diagnostics: BuildDiagnostics {
            weak_vertices: weak,
            relocations,
            merged_parts,
            undersized_parts: undersized,
            final_link_floor,
            final_mu,
        },
    })
}

/// How thoroughly the verifier checks closedness.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub enum VerifyMode {
    Exhaustive,
    /// Uniformly sampled swap sets per pair when enumeration would exceed
    /// the work budget.
    Sampled {
        samples: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct VerifyParams {
    pub beta: Frac,
    pub t: usize,
    pub epsilon: Frac,
    pub mu: Frac,
    pub mode: VerifyMode,
    /// Swap-set enumeration budget per pair before sampling kicks in.
    pub max_exhaustive_subsets: u128,
}

impl VerifyParams {
    pub fn from_good(gp: &GoodPartition, epsilon: Frac, mu: Frac) -> VerifyParams {
        VerifyParams {
            beta: gp.beta,
            t: gp.t,
            epsilon,
            mu,
            mode: VerifyMode::Sampled {
                samples: 2000,
                seed: 0,
            },
            max_exhaustive_subsets: 2_000_000,
        }
    }
}

/// Per-property verification report with counterexamples.
#[derive(Clone, Debug, serde::Serialize)]
pub struct VerifyReport {
    pub sizes_ok: bool,
    pub size_floor: usize,
    pub part_sizes: Vec<usize>,
    pub robust_links_ok: bool,
    pub link_floor: u128,
    pub weak_vertices: Vec<u32>,
    pub closedness_ok: bool,
    pub closedness_threshold: u128,
    pub closedness_exhaustive: bool,
    pub failing_pairs: Vec<(u32, u32)>,
    pub pairs_checked: u64,
    /// Sampling note when closedness was estimated rather than enumerated.
    pub confidence: Option<String>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.sizes_ok && self.robust_links_ok && self.closedness_ok
    }
}

/// Check sizes, robust links, and closedness for the given constants.
pub fn verify_partition(
    h: &Hypergraph,
    f: &PatternGraph,
    gp: &GoodPartition,
    params: &VerifyParams,
) -> Result<VerifyReport> {
    let n = h.n();
    let r = f.r();
    let p = &gp.partition;
    let size_floor = gp.min_part_fraction.ceil_mul(n as u128) as usize;
    let part_sizes: Vec<usize> = p.parts().iter().map(|s| s.len()).collect();
    let sizes_ok = part_sizes.iter().all(|&s| s >= size_floor);

    let profile = robust_profile(h, f, p, params.mu)?;
    let link_floor = params.epsilon.ceil_mul((n as u128).pow((r - 1) as u32));
    let weak: Vec<u32> = (0..n as u32)
        .filter(|&v| (profile.link_counts[v as usize] as u128) < link_floor)
        .collect();
    let robust_links_ok = weak.is_empty();

    let swap_size = params.t * r - 1;
    let threshold = params
        .beta
        .ceil_mul((n as u128).pow(swap_size as u32))
        .max(1);
    let total_subsets = binomial(n.saturating_sub(2), swap_size);
    let exhaustive = match params.mode {
        VerifyMode::Exhaustive => true,
        VerifyMode::Sampled { .. } => total_subsets <= params.max_exhaustive_subsets,
    };
    let oracle = FactorOracle::new(h, f);
    let mut failing_pairs = Vec::new();
    let mut pairs_checked = 0u64;
    let mut confidence = None;
    for part in p.parts() {
        let members = part.to_vec();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (u, v) = (members[i], members[j]);
                pairs_checked += 1;
                let ok = if exhaustive {
                    reachable_count(&oracle, u, v, params.t)? as u128 >= threshold
                } else {
                    let VerifyMode::Sampled { samples, seed } = params.mode else {
                        unreachable!()
                    };
                    let hits = sample_reachable(&oracle, u, v, swap_size, samples, seed)?;
                    let est = hits as u128 * total_subsets / samples as u128;
                    confidence = Some(format!(
                        "closedness sampled with {samples} swap sets per pair"
                    ));
                    est >= threshold
                };
                if !ok && failing_pairs.len() < 16 {
                    failing_pairs.push((u, v));
                }
            }
        }
    }
    Ok(VerifyReport {
        sizes_ok,
        size_floor,
        part_sizes,
        robust_links_ok,
        link_floor,
        weak_vertices: weak,
        closedness_ok: failing_pairs.is_empty(),
        closedness_threshold: threshold,
        closedness_exhaustive: exhaustive,
        failing_pairs,
        pairs_checked,
        confidence,
    })
}

fn sample_reachable(
    oracle: &FactorOracle,
    u: u32,
    v: u32,
    size: usize,
    samples: u64,
    seed: u64,
) -> Result<u64> {
    let h = oracle.host();
    let mut pool: Vec<u32> = h.vertex_set().without(u).without(v).to_vec();
    let mut rng = crate::rng::substream(seed, (u as u64) << 32 | v as u64);
    let mut hits = 0;
    for _ in 0..samples {
        pool.shuffle(&mut rng);
        let s: VSet = pool[..size].iter().copied().collect();
        if oracle.has_factor_on(&s.with(u)) && oracle.has_factor_on(&s.with(v)) {
            hits += 1;
        }
    }
    Ok(hits)
}
