//! Empirical spread estimation.
//!
//! Spread bounds cap the probability that a random structure pins given
//! placements: a vertex-placement distribution is q-vertex-spread when any s
//! fixed (vertex → cluster) assignments occur with probability ≤ q^s, and a
//! factor distribution is q-spread when any fixed s copies appear together
//! with probability ≤ q^s. These estimators measure single and pair event
//! frequencies over seeded trials, fit the smallest constant that makes all
//! estimates pass, and list exceedances against a supplied bound.

use rayon::prelude::*;

use std::collections::BTreeMap;

use crate::bitset::VSet;
use crate::decision::FactorOracle;
use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::pattern::PatternGraph;

#[derive(Clone, Debug, serde::Serialize)]
pub struct EventFreq {
    pub description: String,
    pub count: u64,
    pub frequency: f64,
    /// Binomial standard error sqrt(p̂(1−p̂)/T).
    pub std_error: f64,
}

fn event(description: String, count: u64, trials: u64) -> EventFreq {
    let f = count as f64 / trials as f64;
    EventFreq {
        description,
        count,
        frequency: f,
        std_error: (f * (1.0 - f) / trials as f64).sqrt(),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SpreadEstimate {
    pub trials: u64,
    pub failed_trials: u64,
    /// Supplied per-element bound q; exceedances are measured against it.
    pub bound_q: Option<f64>,
    pub max_single: Option<EventFreq>,
    pub max_pair: Option<EventFreq>,
    /// Smallest constant c such that every single estimate is ≤ c/scale and
    /// every pair estimate is ≤ (c/scale)², where scale is the natural
    /// normalization (n for vertex spread, n^{1/m₁} for factor spread).
    pub fitted_constant: f64,
    /// Events whose frequency exceeds the supplied bound by more than three
    /// binomial standard errors.
    pub exceedances: Vec<String>,
}

/// Estimate vertex spread of a cluster-assignment sampler. The sampler maps
/// a trial index to `Some(assignment)` (vertex → cluster position) or `None`
/// for a failed trial. Pair events are tracked exhaustively while the cell
/// square stays small, otherwise over a seeded sample of cell pairs.
pub fn estimate_vertex_spread<F>(
    sampler: F,
    n: usize,
    clusters: usize,
    trials: u64,
    bound_q: Option<f64>,
) -> SpreadEstimate
where
    F: Fn(u64) -> Option<Vec<usize>> + Sync,
{
    let cells = n * clusters;
    let full_pairs = cells <= 1500;
    let pair_len = if full_pairs { cells * cells } else { 0 };
    let (singles, pairs, failed) = (0..trials)
        .into_par_iter()
        .fold(
            || (vec![0u64; cells], vec![0u64; pair_len], 0u64),
            |(mut s, mut pr, mut failed), trial| {
                match sampler(trial) {
                    None => failed += 1,
                    Some(assign) => {
                        debug_assert_eq!(assign.len(), n);
                        for (v, &c) in assign.iter().enumerate() {
                            s[v * clusters + c] += 1;
                        }
                        if full_pairs {
                            for (v, &c) in assign.iter().enumerate() {
                                let a = v * clusters + c;
                                for (w, &cw) in assign.iter().enumerate().skip(v + 1) {
                                    let b = w * clusters + cw;
                                    pr[a * cells + b] += 1;
                                }
                            }
                        }
                    }
                }
                (s, pr, failed)
            },
        )
        .reduce(
            || (vec![0u64; cells], vec![0u64; pair_len], 0u64),
            |(mut s1, mut p1, f1), (s2, p2, f2)| {
                for (a, b) in s1.iter_mut().zip(&s2) {
                    *a += b;
                }
                for (a, b) in p1.iter_mut().zip(&p2) {
                    *a += b;
                }
                (s1, p1, f1 + f2)
            },
        );

    let describe_cell =
        |cell: usize| format!("vertex {} in cluster {}", cell / clusters, cell % clusters);
    let max_single_cell = (0..cells).max_by_key(|&c| singles[c]);
    let max_single = max_single_cell.map(|c| event(describe_cell(c), singles[c], trials));
    let max_pair = if full_pairs {
        (0..pair_len)
            .max_by_key(|&ix| pairs[ix])
            .filter(|&ix| pairs[ix] > 0)
            .map(|ix| {
                event(
                    format!(
                        "{} and {}",
                        describe_cell(ix / cells),
                        describe_cell(ix % cells)
                    ),
                    pairs[ix],
                    trials,
                )
            })
    } else {
        None
    };
    let scale = n as f64;
    let fitted = fit_constant(&max_single, &max_pair, scale);
    let mut exceedances = Vec::new();
    if let Some(q) = bound_q {
        #[allow(clippy::needless_range_loop)]
        for c in 0..cells {
            let e = event(describe_cell(c), singles[c], trials);
            if e.frequency > q + 3.0 * e.std_error {
                exceedances.push(e.description);
            }
        }
        if full_pairs {
            #[allow(clippy::needless_range_loop)]
            for ix in 0..pair_len {
                if pairs[ix] == 0 {
                    continue;
                }
                let e = event(
                    format!(
                        "{} and {}",
                        describe_cell(ix / cells),
                        describe_cell(ix % cells)
                    ),
                    pairs[ix],
                    trials,
                );
                if e.frequency > q * q + 3.0 * e.std_error {
                    exceedances.push(e.description);
                }
            }
        }
    }
    SpreadEstimate {
        trials,
        failed_trials: failed,
        bound_q,
        max_single,
        max_pair,
        fitted_constant: fitted,
        exceedances,
    }
}

fn fit_constant(single: &Option<EventFreq>, pair: &Option<EventFreq>, scale: f64) -> f64 {
    let s = single.as_ref().map_or(0.0, |e| e.frequency) * scale;
    let p = pair.as_ref().map_or(0.0, |e| e.frequency.sqrt()) * scale;
    s.max(p)
}

/// Estimate factor spread of a copy-set sampler: single-copy and copy-pair
/// containment frequencies against the scale n^{1/m₁}. Also returns the
/// per-copy containment counts for direct comparison with exact oracles.
pub fn estimate_factor_spread<F>(
    sampler: F,
    n: usize,
    m1: crate::frac::Frac,
    trials: u64,
    bound_q: Option<f64>,
) -> (SpreadEstimate, Vec<(VSet, u64)>)
where
    F: Fn(u64) -> Option<Vec<VSet>> + Sync,
{
    let (singles, pairs, failed) = (0..trials)
        .into_par_iter()
        .fold(
            || {
                (
                    BTreeMap::<VSet, u64>::new(),
                    BTreeMap::<(VSet, VSet), u64>::new(),
                    0u64,
                )
            },
            |(mut s, mut pr, mut failed), trial| {
                match sampler(trial) {
                    None => failed += 1,
                    Some(mut copies) => {
                        copies.sort();
                        for (i, a) in copies.iter().enumerate() {
                            *s.entry(*a).or_default() += 1;
                            for b in copies.iter().skip(i + 1) {
                                *pr.entry((*a, *b)).or_default() += 1;
                            }
                        }
                    }
                }
                (s, pr, failed)
            },
        )
        .reduce(
            || (BTreeMap::new(), BTreeMap::new(), 0u64),
            |(mut s1, mut p1, f1), (s2, p2, f2)| {
                for (k, v) in s2 {
                    *s1.entry(k).or_default() += v;
                }
                for (k, v) in p2 {
                    *p1.entry(k).or_default() += v;
                }
                (s1, p1, f1 + f2)
            },
        );

    let max_single = singles
        .iter()
        .max_by_key(|(_, &c)| c)
        .map(|(s, &c)| event(format!("copy {:?}", s.to_vec()), c, trials));
    let max_pair = pairs.iter().max_by_key(|(_, &c)| c).map(|((a, b), &c)| {
        event(
            format!("copies {:?} and {:?}", a.to_vec(), b.to_vec()),
            c,
            trials,
        )
    });
    let scale = (n as f64).powf(m1.den() as f64 / m1.num() as f64);
    let fitted = fit_constant(&max_single, &max_pair, scale);
    let mut exceedances = Vec::new();
    if let Some(q) = bound_q {
        for (s, &c) in &singles {
            let e = event(format!("copy {:?}", s.to_vec()), c, trials);
            if e.frequency > q + 3.0 * e.std_error {
                exceedances.push(e.description);
            }
        }
        for ((a, b), &c) in &pairs {
            let e = event(
                format!("copies {:?} and {:?}", a.to_vec(), b.to_vec()),
                c,
                trials,
            );
            if e.frequency > q * q + 3.0 * e.std_error {
                exceedances.push(e.description);
            }
        }
    }
    let est = SpreadEstimate {
        trials,
        failed_trials: failed,
        bound_q,
        max_single,
        max_pair,
        fitted_constant: fitted,
        exceedances,
    };
    (est, singles.into_iter().collect())
}

/// All perfect F-packings of the host, enumerated by the oracle's
/// least-flexible-vertex branching. Intended for small hosts where the
/// exact list doubles as a uniform sampler.
pub fn enumerate_factors(h: &Hypergraph, f: &PatternGraph) -> Result<Vec<Vec<VSet>>> {
    let oracle = FactorOracle::new(h, f);
    let copy_sets = f.copy_sets_within(h, &h.vertex_set());
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); h.n()];
    for (i, c) in copy_sets.iter().enumerate() {
        for v in c.iter() {
            incidence[v as usize].push(i as u32);
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_rec(
        &oracle,
        &copy_sets,
        &incidence,
        h.vertex_set(),
        &mut current,
        &mut out,
    );
    Ok(out)
}

fn enumerate_rec(
    oracle: &FactorOracle,
    copy_sets: &[VSet],
    incidence: &[Vec<u32>],
    avail: VSet,
    current: &mut Vec<VSet>,
    out: &mut Vec<Vec<VSet>>,
) {
    if avail.is_empty() {
        out.push(current.clone());
        return;
    }
    // prune unfactorable branches through the memoized oracle
    if !oracle.has_factor_on(&avail) {
        return;
    }
    let pivot = avail.first().expect("nonempty");
    for &c in &incidence[pivot as usize] {
        let cs = copy_sets[c as usize];
        if cs.is_subset_of(&avail) {
            current.push(cs);
            enumerate_rec(oracle, copy_sets, incidence, avail.minus(&cs), current, out);
            current.pop();
        }
    }
}

/// Uniform sampler over an enumerated factor list, keyed by (seed, trial).
pub fn uniform_factor_sampler(
    factors: Vec<Vec<VSet>>,
    seed: u64,
) -> impl Fn(u64) -> Option<Vec<VSet>> + Sync {
    move |trial| {
        if factors.is_empty() {
            return None;
        }
        let ix = rand::Rng::random_range(&mut crate::rng::substream(seed, trial), 0..factors.len());
        Some(factors[ix].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::Frac;
    use crate::hypergraph::complete_kgraph;

    #[test]
    fn enumeration_matches_count() {
        let h = complete_kgraph(9, 3).unwrap();
        let f = PatternGraph::single_edge(3);
        let all = enumerate_factors(&h, &f).unwrap();
        assert_eq!(
            all.len() as u128,
            crate::decision::count_perfect_matchings(&h).count
        );
        // each is a genuine perfect matching
        for m in all.iter().take(20) {
            let w = crate::decision::PackingWitness { copies: m.clone() };
            assert!(w.validate(&h, &f, Some(&h.vertex_set())));
        }
    }

    #[test]
    fn degenerate_single_cluster_spread() {
        // every vertex always lands in cluster 0: frequency 1, bound passes
        // only with c ≥ n
        let est = estimate_vertex_spread(|_| Some(vec![0; 6]), 6, 1, 200, None);
        assert_eq!(est.failed_trials, 0);
        let ms = est.max_single.unwrap();
        assert_eq!(ms.count, 200);
        assert!((est.fitted_constant - 6.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_pm_sampler_is_roughly_uniform() {
        let h = complete_kgraph(6, 3).unwrap();
        let f = PatternGraph::single_edge(3);
        let all = enumerate_factors(&h, &f).unwrap();
        assert_eq!(all.len(), 10);
        let sampler = uniform_factor_sampler(all, 7);
        let trials = 4000;
        let (est, singles) =
            estimate_factor_spread(&sampler, 6, Frac::new(1, 2).unwrap(), trials, None);
        assert_eq!(est.failed_trials, 0);
        // each edge lies in 1 of 10 PMs... a PM has 2 edges over 20 edges:
        // P[e ∈ M] = 10·2/ (20 ·10) = 1/10 per edge
        for (_, c) in &singles {
            let f = *c as f64 / trials as f64;
            assert!((f - 0.1).abs() < 0.03, "freq {f}");
        }
    }
}
