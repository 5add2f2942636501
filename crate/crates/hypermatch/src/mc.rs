//! Monte Carlo harnesses: sparsification threshold curves and
//! subset-inheritance experiments.
//!
//! Trials are embarrassingly parallel; every trial draws from its own
//! substream of the master seed, so results do not depend on scheduling.

use rayon::prelude::*;

use crate::bitset::VSet;
use crate::cluster::exp_neg;
use crate::decision::FactorOracle;
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::hypergraph::{binomial, for_each_combination, Hypergraph};
use crate::partition::{IndexVector, VertexPartition};
use crate::pattern::PatternGraph;
use crate::robustness::RobustProfile;

/// Wilson score interval at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ThresholdPoint {
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub lower: f64,
    pub upper: f64,
}

/// Empirical P[a perfect F-packing survives sparsification at p] per grid
/// point, existence decided by the exact oracle. Wilson intervals at z=1.96.
pub fn mc_threshold(
    h: &Hypergraph,
    f: &PatternGraph,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<ThresholdPoint>> {
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidProbability(
            *grid
                .iter()
                .find(|p| !(0.0..=1.0).contains(*p))
                .expect("checked"),
        ));
    }
    grid.iter()
        .enumerate()
        .map(|(ix, &p)| {
            let base = crate::rng::derive_seed(seed, ix as u64);
            let successes = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let hp = h
                        .sparsify(p, crate::rng::derive_seed(base, t))
                        .expect("p validated");
                    let oracle = FactorOracle::new(&hp, f);
                    oracle.has_factor_on(&hp.vertex_set()) as u64
                })
                .sum();
            let (lower, upper) = wilson_interval(successes, trials, 1.96);
            Ok(ThresholdPoint {
                p,
                trials,
                successes,
                lower,
                upper,
            })
        })
        .collect()
}

/// Curve rows as CSV: `p,trials,successes,lower,upper`.
pub fn threshold_csv(points: &[ThresholdPoint]) -> String {
    let mut out = String::from("p,trials,successes,lower,upper\n");
    for pt in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            pt.p, pt.trials, pt.successes, pt.lower, pt.upper
        ));
    }
    out
}

/// Which inherited property a subset experiment samples.
#[derive(Clone, Debug, serde::Serialize)]
pub enum InheritedProperty {
    /// Copies with a fixed index vector stay plentiful: fail when the
    /// induced subgraph has fewer than ceil(γ′·ℓ^r) copies of F with the
    /// vector, given ≥ γ·n^r in the host.
    RobustCopies {
        vector: IndexVector,
        gamma: Frac,
        gamma_prime: Frac,
    },
    /// A fixed vertex keeps its robust links: fail when the vertex has
    /// fewer than ceil(γ′·ℓ^{r−1}) robust link sets inside the subset.
    RobustLinks {
        vertex: u32,
        mu: Frac,
        gamma: Frac,
        gamma_prime: Frac,
    },
    /// A host part stays closed in the induced subgraph at (β′, t).
    Reachability {
        part: usize,
        beta: Frac,
        beta_prime: Frac,
        t: usize,
    },
    /// The induced subgraph keeps its minimum d-degree fraction.
    Codegree {
        d: usize,
        delta: Frac,
        gamma: Frac,
        gamma_prime: Frac,
    },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct InheritanceReport {
    pub property: String,
    pub subset_size: usize,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    /// The concentration bound evaluated at the chosen constants.
    pub stated_bound: f64,
    pub binomial_se: f64,
    /// failure_rate ≤ stated_bound + 3·se.
    pub within_bound_with_slack: bool,
    /// Whether the host-side hypothesis of the bound held exactly.
    pub hypothesis_holds: bool,
}

/// Sample uniform ℓ-subsets and measure how often the selected property
/// fails to transfer, against the matching concentration bound.
#[allow(clippy::too_many_arguments)]
pub fn subset_inheritance_test(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
    profile: &RobustProfile,
    property: &InheritedProperty,
    ell: usize,
    trials: u64,
    seed: u64,
) -> Result<InheritanceReport> {
    let n = h.n();
    if ell == 0 || ell > n {
        return Err(Error::InvalidSizes(format!(
            "subset size {ell} outside (0, {n}]"
        )));
    }
    let (hypothesis_holds, stated_bound) = bound_for(h, f, p, profile, property, ell)?;
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = crate::rng::substream(seed, t);
            let mut pool: Vec<u32> = (0..n as u32).collect();
            rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), &mut rng);
            let a: VSet = pool[..ell].iter().copied().collect();
            (!property_holds(h, f, p, profile, property, &a)) as u64
        })
        .sum();
    let failure_rate = failures as f64 / trials as f64;
    let binomial_se = (failure_rate * (1.0 - failure_rate) / trials as f64).sqrt();
    Ok(InheritanceReport {
        property: format!("{property:?}"),
        subset_size: ell,
        trials,
        failures,
        failure_rate,
        stated_bound,
        binomial_se,
        within_bound_with_slack: failure_rate <= stated_bound + 3.0 * binomial_se,
        hypothesis_holds,
    })
}

fn bound_for(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
    profile: &RobustProfile,
    property: &InheritedProperty,
    ell: usize,
) -> Result<(bool, f64)> {
    let n = h.n();
    let r = f.r();
    let lf = ell as f64;
    Ok(match property {
        InheritedProperty::RobustCopies {
            vector,
            gamma,
            gamma_prime,
        } => {
            let host = profile.raw_counts.get(vector).copied().unwrap_or(0);
            let hyp = host >= gamma.ceil_mul((n as u128).pow(r as u32));
            let diff = gamma.to_f64() - gamma_prime.to_f64();
            (hyp, 2.0 * exp_neg(lf * diff * diff / 2.0))
        }
        InheritedProperty::RobustLinks {
            vertex,
            gamma,
            gamma_prime,
            ..
        } => {
            let hyp = profile.link_counts[*vertex as usize] as u128
                >= gamma.ceil_mul((n as u128).pow((r - 1) as u32));
            let diff = gamma.to_f64() - gamma_prime.to_f64();
            (hyp, 2.0 * exp_neg(lf * diff * diff / 2.0))
        }
        InheritedProperty::Reachability {
            part,
            beta,
            beta_prime,
            t,
        } => {
            // host-side: fraction of part pairs that are not reachable
            let oracle = FactorOracle::new(h, f);
            let members = p.parts()[*part].to_vec();
            let threshold = beta.ceil_mul((n as u128).pow((t * r - 1) as u32)).max(1);
            let mut non = 0u64;
            let mut total = 0u64;
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    total += 1;
                    if (crate::robustness::reachable_count(&oracle, members[i], members[j], *t)?
                        as u128)
                        < threshold
                    {
                        non += 1;
                    }
                }
            }
            let eta = if total == 0 {
                0.0
            } else {
                non as f64 / total as f64
            };
            let diff = beta.to_f64() - beta_prime.to_f64();
            let per_pair = eta + 2.0 * exp_neg(diff * diff * lf / 2.0);
            (true, binomial(ell, 2) as f64 * per_pair)
        }
        InheritedProperty::Codegree {
            d,
            delta,
            gamma,
            gamma_prime,
        } => {
            // host-side: fraction of d-sets below the degree floor
            let floor = delta.add(*gamma)?.ceil_mul(binomial(n - d, h.k() - d));
            let mut below = 0u64;
            let mut total = 0u64;
            for_each_combination(n, *d, |c| {
                let s: VSet = c.iter().map(|&v| v as u32).collect();
                total += 1;
                let deg = h.edge_sets().iter().filter(|e| s.is_subset_of(e)).count();
                if (deg as u128) < floor {
                    below += 1;
                }
                true
            });
            let alpha = below as f64 / total as f64;
            let diff = gamma.to_f64() - gamma_prime.to_f64();
            let per_set = alpha + exp_neg(diff * diff * lf / 4.0);
            (true, binomial(ell, *d) as f64 * per_set)
        }
    })
}

fn property_holds(
    h: &Hypergraph,
    f: &PatternGraph,
    p: &VertexPartition,
    profile: &RobustProfile,
    property: &InheritedProperty,
    a: &VSet,
) -> bool {
    let r = f.r();
    let ell = a.len();
    match property {
        InheritedProperty::RobustCopies {
            vector,
            gamma_prime,
            ..
        } => {
            let need = gamma_prime.ceil_mul((ell as u128).pow(r as u32));
            let mut have = 0u128;
            if f.is_single_edge() {
                for e in h.edge_sets() {
                    if e.is_subset_of(a) && p.index_vector(e) == *vector {
                        have += 1;
                        if have >= need {
                            break;
                        }
                    }
                }
            } else {
                let members = a.to_vec();
                for_each_combination(members.len(), r, |c| {
                    let s: VSet = c.iter().map(|&ix| members[ix]).collect();
                    if p.index_vector(&s) == *vector {
                        have += f.copies_on(h, &s) as u128;
                    }
                    have < need
                });
            }
            have >= need
        }
        InheritedProperty::RobustLinks {
            vertex,
            gamma_prime,
            ..
        } => {
            if !a.contains(*vertex) {
                return true; // vacuous when the vertex is not sampled
            }
            let need = gamma_prime.ceil_mul((ell as u128).pow((r - 1) as u32));
            let mut have = 0u128;
            if f.is_single_edge() {
                for e in h.edge_sets() {
                    if e.contains(*vertex)
                        && e.without(*vertex).is_subset_of(a)
                        && profile.is_robust(&p.index_vector(e))
                    {
                        have += 1;
                    }
                }
            } else {
                let pool = a.without(*vertex).to_vec();
                for_each_combination(pool.len(), r - 1, |c| {
                    let s: VSet = c.iter().map(|&ix| pool[ix]).collect();
                    let full = s.with(*vertex);
                    if profile.is_robust(&p.index_vector(&full)) && f.spans(h, &full) {
                        have += 1;
                    }
                    have < need
                });
            }
            have >= need
        }
        InheritedProperty::Reachability {
            part,
            beta_prime,
            t,
            ..
        } => {
            let oracle = FactorOracle::new(h, f);
            let members = p.parts()[*part].intersection(a).to_vec();
            let swap = t * r - 1;
            if ell < swap + 2 {
                return members.len() < 2;
            }
            let threshold = beta_prime.ceil_mul((ell as u128).pow(swap as u32)).max(1);
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    let (u, v) = (members[i], members[j]);
                    let pool = a.without(u).without(v).to_vec();
                    let mut count = 0u128;
                    for_each_combination(pool.len(), swap, |ix| {
                        let s: VSet = ix.iter().map(|&q| pool[q]).collect();
                        if oracle.has_factor_on(&s.with(u)) && oracle.has_factor_on(&s.with(v)) {
                            count += 1;
                        }
                        count < threshold
                    });
                    if count < threshold {
                        return false;
                    }
                }
            }
            true
        }
        InheritedProperty::Codegree {
            d,
            delta,
            gamma_prime,
            ..
        } => {
            if ell < 2 * d {
                return true;
            }
            let members = a.to_vec();
            let floor = delta
                .add(*gamma_prime)
                .expect("small constants")
                .ceil_mul(binomial(ell - d, h.k() - d));
            let inside: Vec<&VSet> = h.edge_sets().iter().filter(|e| e.is_subset_of(a)).collect();
            let mut ok = true;
            for_each_combination(members.len(), *d, |c| {
                let s: VSet = c.iter().map(|&ix| members[ix]).collect();
                let deg = inside.iter().filter(|e| s.is_subset_of(e)).count();
                if (deg as u128) < floor {
                    ok = false;
                }
                ok
            });
            ok
        }
    }
}
