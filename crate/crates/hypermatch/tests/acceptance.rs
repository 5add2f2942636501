//! Acceptance suite: one test per criterion, printing a pass/fail line with
//! the measured quantity (run with `--nocapture` to see them all).
//!
//! Every threshold is pinned here in code; expected values marked as derived
//! are recomputed by their independent oracles inside the test body before
//! being compared.

use std::time::Instant;

use hypermatch::bitset::VSet;
use hypermatch::cluster::{sample_f_factor, ClassifyThresholds, PipelineParams};
use hypermatch::decision::{
    complete_graph_pm_count, count_perfect_matchings, count_perfect_matchings_on, density_params,
    procedure_perfect_matching, FactorOracle, ProcedureParams, SparsifiedOracle, Verdict,
};
use hypermatch::frac::Frac;
use hypermatch::hypergraph::{
    binomial, complete_kgraph, divisibility_barrier, random_kgraph_min_codegree,
};
use hypermatch::lattice::{coset_group, is_full, oracles, CosetContext, IntegerLattice};
use hypermatch::mc::mc_threshold;
use hypermatch::partition::{compositions, IndexVector, VertexPartition};
use hypermatch::pattern::PatternGraph;
use hypermatch::robustness::{build_partition, robust_profile, BuildParams};
use hypermatch::spread::{enumerate_factors, uniform_factor_sampler};

fn pass(criterion: &str, detail: String, started: Instant, budget_s: u64) {
    let secs = started.elapsed().as_secs_f64();
    assert!(
        secs < budget_s as f64,
        "{criterion}: runtime {secs:.1}s exceeded the {budget_s}s budget"
    );
    println!("{criterion}: PASS ({detail}; {secs:.2}s < {budget_s}s)");
}

fn edge3() -> PatternGraph {
    PatternGraph::single_edge(3)
}

fn milli(x: u64) -> Frac {
    Frac::new(x, 1000).unwrap()
}

#[test]
fn criterion_01_exact_counts() {
    let started = Instant::now();
    for (n, frozen) in [(6usize, 10u128), (9, 280), (12, 15400)] {
        // independent oracle: the closed formula n!/((k!)^{n/k}(n/k)!)
        let formula = complete_graph_pm_count(n, 3);
        assert_eq!(
            formula, frozen,
            "formula disagrees with frozen value at n={n}"
        );
        let counted = count_perfect_matchings(&complete_kgraph(n, 3).unwrap());
        assert!(counted.divisible);
        assert_eq!(counted.count, frozen, "backtracking count at n={n}");
    }
    pass(
        "criterion 01 exact counts",
        "K_6=10, K_9=280, K_12=15400".into(),
        started,
        5,
    );
}

#[test]
fn criterion_02_barrier_rejection() {
    let started = Instant::now();
    let mut cases = 0;
    for n in [6usize, 9, 12, 15] {
        for x in (1..n).step_by(2) {
            let h = divisibility_barrier(n, 3, x).unwrap();
            // oracle: the parity obstruction means zero perfect matchings
            assert_eq!(
                count_perfect_matchings(&h).count,
                0,
                "barrier({n},3,{x}) unexpectedly has a matching"
            );
            // decision run on the canonical class partition
            let p = VertexPartition::new(
                n,
                (0..n as u32)
                    .map(|v| if (v as usize) < x { 0 } else { 1 })
                    .collect(),
            )
            .unwrap();
            let profile = robust_profile(&h, &edge3(), &p, milli(1)).unwrap();
            let mut oracle = SparsifiedOracle::new(&h, 1.0, 7).unwrap();
            let out = procedure_perfect_matching(
                &h,
                &p,
                &profile,
                &ProcedureParams {
                    eta: milli(1),
                    extend: false,
                    extension_reveal_cap: None,
                },
                &mut oracle,
            )
            .unwrap();
            assert_eq!(
                out.verdict,
                Verdict::Reject,
                "false accept on barrier({n},3,{x})"
            );
            cases += 1;
        }
    }
    // the flagship instances also reject with a *built* partition
    for (n, x) in [(12usize, 5usize), (15, 5), (15, 7)] {
        let h = divisibility_barrier(n, 3, x).unwrap();
        let params = BuildParams::defaults(Frac::new(1, (2 * n) as u64).unwrap(), 3).unwrap();
        let built = build_partition(&h, &edge3(), &params).unwrap();
        let profile = robust_profile(&h, &edge3(), &built.good.partition, milli(1)).unwrap();
        let mut oracle = SparsifiedOracle::new(&h, 1.0, 11).unwrap();
        let out = procedure_perfect_matching(
            &h,
            &built.good.partition,
            &profile,
            &ProcedureParams {
                eta: milli(1),
                extend: false,
                extension_reveal_cap: None,
            },
            &mut oracle,
        )
        .unwrap();
        assert_eq!(
            out.verdict,
            Verdict::Reject,
            "false accept on built barrier({n},3,{x})"
        );
    }
    pass(
        "criterion 02 barrier rejection",
        format!("{cases} odd-class barriers rejected, 0 false accepts"),
        started,
        60,
    );
}

#[test]
fn criterion_03_decision_soundness_sweep() {
    let started = Instant::now();
    let f = edge3();
    let mut accepts = 0u32;
    let mut rejects = 0u32;
    let mut extensions_checked = 0u32;
    for (n, edge_prob, delta, count) in [(9usize, 0.85f64, 4usize, 100u64), (12, 0.8, 5, 100)] {
        for instance in 0..count {
            let h =
                random_kgraph_min_codegree(n, 3, edge_prob, delta, 0xC3 + instance, 200).unwrap();
            let params = BuildParams::defaults(Frac::new(1, n as u64).unwrap(), 3).unwrap();
            let built = build_partition(&h, &f, &params).unwrap();
            let p = built.good.partition;
            let profile = robust_profile(&h, &f, &p, milli(1)).unwrap();
            let mut oracle = SparsifiedOracle::new(&h, 1.0, instance).unwrap();
            let out = procedure_perfect_matching(
                &h,
                &p,
                &profile,
                &ProcedureParams {
                    eta: milli(1),
                    extend: true,
                    extension_reveal_cap: None,
                },
                &mut oracle,
            )
            .unwrap();
            match out.verdict {
                Verdict::Reject => {
                    rejects += 1;
                    assert_eq!(
                        count_perfect_matchings(&h).count,
                        0,
                        "reject but a matching exists (n={n}, instance={instance})"
                    );
                }
                Verdict::Accept => {
                    accepts += 1;
                    let ext = out.extension.expect("extension requested");
                    assert!(
                        ext.warning.is_none(),
                        "extension stalled (n={n}, i={instance})"
                    );
                    assert!(ext.remainder_in_lattice);
                    let covered: VSet = ext
                        .extended_matching
                        .iter()
                        .flat_map(|e| e.iter().copied())
                        .collect();
                    let rest = h.vertex_set().minus(&covered);
                    let oracle = FactorOracle::new(&h, &f);
                    assert!(
                        oracle.has_factor_on(&rest),
                        "no matching on the remainder (n={n}, instance={instance})"
                    );
                    extensions_checked += 1;
                }
            }
        }
    }
    assert_eq!(accepts + rejects, 200);
    pass(
        "criterion 03 decision soundness",
        format!("200 dense instances: {accepts} accepts ({extensions_checked} remainders oracle-matched), {rejects} rejects, 0 violations"),
        started,
        600,
    );
}

#[test]
fn criterion_04_lattice_algebra() {
    let started = Instant::now();
    use rand::Rng;
    let mut rng = hypermatch::rng::stream(0xA11CE);
    let mut queries = 0u64;
    let mut finite_checked = 0u32;
    for set in 0..100u32 {
        let d = rng.random_range(1..=4usize);
        let mut gens: Vec<IndexVector> = Vec::new();
        for _ in 0..rng.random_range(1..=3usize) {
            loop {
                let v: Vec<i64> = (0..d).map(|_| rng.random_range(0..=4)).collect();
                if v.iter().sum::<i64>() % 3 == 0 {
                    gens.push(IndexVector(v));
                    break;
                }
            }
        }
        let lattice = IntegerLattice::from_generators(d, &gens).unwrap();
        for _ in 0..100 {
            // query near the lattice: a small combination plus unit noise
            let mut v = IndexVector::zero(d);
            for g in &gens {
                let c = rng.random_range(-3..=3);
                for (vi, &gi) in v.0.iter_mut().zip(&g.0) {
                    *vi += c * gi;
                }
            }
            if rng.random_range(0..2) == 1 {
                let i = rng.random_range(0..d);
                v.0[i] += rng.random_range(-1..=1i64);
            }
            let fast = lattice.contains(&v).unwrap();
            let slow = oracles::membership_by_bounded_search(&gens, &v, 10);
            assert_eq!(
                fast, slow,
                "membership mismatch: set {set} gens {gens:?} v {v:?}"
            );
            queries += 1;
        }
        let group = coset_group(&lattice, 3).unwrap();
        if let Some(size) = group.size {
            if size <= 4096 {
                let oracle = oracles::classes_by_membership(&lattice, 3, d, 8192);
                assert_eq!(
                    size, oracle as u128,
                    "coset size mismatch: set {set} gens {gens:?}"
                );
                finite_checked += 1;
            }
        }
    }
    assert_eq!(queries, 10_000);
    pass(
        "criterion 04 lattice algebra",
        format!("10000 membership queries agreed; {finite_checked} finite quotients matched class enumeration"),
        started,
        60,
    );
}

#[test]
fn criterion_05_full_set_properties() {
    let started = Instant::now();
    let mut families = 0u32;
    for d in [2usize, 3] {
        let k_vectors = compositions(d, 3);
        let total = 1u32 << k_vectors.len();
        for mask in 1..total {
            let subset: Vec<IndexVector> = k_vectors
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            if !is_full(&subset, 3, d).unwrap() {
                continue;
            }
            families += 1;
            let lattice = IntegerLattice::from_generators(d, &subset).unwrap();
            // pairwise unit transfers exist for every index triple
            for i1 in 0..d {
                for i2 in 0..d {
                    for i3 in 0..d {
                        let v = IndexVector::unit(d, i1)
                            .add(&IndexVector::unit(d, i2))
                            .sub(&IndexVector::unit(d, i3));
                        let found = (0..d)
                            .any(|i4| lattice.contains(&v.sub(&IndexVector::unit(d, i4))).unwrap());
                        assert!(found, "no unit transfer for ({i1},{i2},{i3}) in {subset:?}");
                    }
                }
            }
            // every ambient vector in the test box admits a unit swap
            let mut box_checked = 0u64;
            for_each_box_vector(d, 4, 3, |v| {
                for i in 0..d {
                    let j = lattice.transfer_index(v, i).unwrap();
                    assert!(
                        j.is_some(),
                        "no transfer for {v:?}, part {i}, gens {subset:?}"
                    );
                }
                box_checked += 1;
            });
            assert!(box_checked > 0);
            // quotient no larger than the part count
            let group = coset_group(&lattice, 3).unwrap();
            let size = group.size.expect("full sets have finite quotients");
            assert!(size <= d as u128, "|Q| = {size} > d = {d} for {subset:?}");
        }
    }
    pass(
        "criterion 05 full-set properties",
        format!("{families} full families satisfied unit-transfer closure and |Q| ≤ d"),
        started,
        30,
    );
}

fn for_each_box_vector(d: usize, radius: i64, r: i64, mut f: impl FnMut(&IndexVector)) {
    fn rec(d: usize, radius: i64, r: i64, cur: &mut Vec<i64>, f: &mut impl FnMut(&IndexVector)) {
        if cur.len() == d {
            if cur.iter().sum::<i64>().rem_euclid(r) == 0 {
                f(&IndexVector(cur.clone()));
            }
            return;
        }
        for c in -radius..=radius {
            cur.push(c);
            rec(d, radius, r, cur, f);
            cur.pop();
        }
    }
    rec(d, radius, r, &mut Vec::new(), &mut f);
}

#[test]
fn criterion_06_quotient_bound_on_dense_instances() {
    let started = Instant::now();
    let f = edge3();
    for instance in 0..50u64 {
        let h = random_kgraph_min_codegree(12, 3, 0.8, 4, 0xFAC7 + instance, 200).unwrap();
        let params = BuildParams::defaults(Frac::new(1, 24).unwrap(), 3).unwrap();
        let built = build_partition(&h, &f, &params).unwrap();
        let p = built.good.partition;
        let floor = params.min_part_fraction.ceil_mul(12) as usize;
        assert!(
            p.parts().iter().all(|part| part.len() >= floor),
            "built part below floor (instance {instance})"
        );
        let profile = robust_profile(&h, &f, &p, milli(1)).unwrap();
        let group = coset_group(&profile.lattice().unwrap(), 3).unwrap();
        let size = group.size.unwrap_or(u128::MAX);
        assert!(
            size <= p.d() as u128,
            "|Q| = {size} > d = {} (instance {instance})",
            p.d()
        );
    }
    pass(
        "criterion 06 quotient bound",
        "50 dense instances: |Q| ≤ d".into(),
        started,
        300,
    );
}

#[test]
fn criterion_07_sparsification_statistics() {
    let started = Instant::now();
    let h = complete_kgraph(12, 3).unwrap();
    let grid = [0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
    let points = mc_threshold(&h, &edge3(), &grid, 500, 0x5EED).unwrap();
    assert_eq!(points[0].successes, 0, "p=0 must never contain a matching");
    assert_eq!(
        points[6].successes, 500,
        "p=1 must always contain a matching"
    );
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (&points[i], &points[j]);
            let rate_a = a.successes as f64 / a.trials as f64;
            let rate_b = b.successes as f64 / b.trials as f64;
            let width = (a.upper - a.lower).max(b.upper - b.lower);
            assert!(
                rate_a <= rate_b + 3.0 * width,
                "curve not monotone within tolerance at p={} vs p={}",
                a.p,
                b.p
            );
        }
    }
    let curve: Vec<String> = points
        .iter()
        .map(|pt| format!("{}→{}", pt.p, pt.successes))
        .collect();
    pass(
        "criterion 07 threshold curve",
        curve.join(", "),
        started,
        600,
    );
}

#[test]
fn criterion_08_pipeline_validity() {
    let started = Instant::now();
    let h = complete_kgraph(24, 3).unwrap();
    let f = edge3();
    let p = VertexPartition::trivial(24);
    let profile = robust_profile(&h, &f, &p, milli(1)).unwrap();
    let thresholds = ClassifyThresholds::derive(
        Frac::ONE,
        Frac::new(1, 100).unwrap(),
        Frac::new(1, 24).unwrap(),
        milli(1),
        milli(1),
        Frac::new(1, 3).unwrap(),
        2,
        1,
        3,
        1,
        1,
        12,
    )
    .unwrap();
    let ctx = CosetContext::new(&profile.lattice().unwrap(), 3).unwrap();
    let mut successes = 0u32;
    for trial in 0..100u64 {
        let mut params = PipelineParams::new(
            12,
            1,
            hypermatch::rng::derive_seed(0xBEEF, trial),
            thresholds.clone(),
        );
        params.retry_cap = 100;
        let run = sample_f_factor(&h, &f, &p, &profile, &params)
            .unwrap_or_else(|e| panic!("trial {trial} failed: {e}"));
        assert!(
            run.witness.validate(&h, &f, Some(&h.vertex_set())),
            "invalid matching"
        );
        assert!(
            run.plan.residue_conserved(&ctx, &p).unwrap(),
            "conservation broken"
        );
        run.plan.check_structure(&h.vertex_set()).unwrap();
        successes += 1;
    }
    assert_eq!(successes, 100);
    pass(
        "criterion 08 pipeline validity",
        "100/100 verified matchings with residue conservation".into(),
        started,
        600,
    );
}

#[test]
fn criterion_09_spread_sanity() {
    let started = Instant::now();
    let h = complete_kgraph(9, 3).unwrap();
    let f = edge3();
    // oracle ratios first: for each edge, matchings containing it
    let total = count_perfect_matchings(&h).count;
    assert_eq!(total, 280);
    let ratios: Vec<(VSet, f64)> = h
        .edge_sets()
        .iter()
        .map(|e| {
            let rest = h.vertex_set().minus(e);
            let with_e = count_perfect_matchings_on(&h, rest).count;
            (*e, with_e as f64 / total as f64)
        })
        .collect();
    // symmetry of the complete graph: every edge sits in 10 of the 280
    assert!(ratios
        .iter()
        .all(|(_, r)| (*r - 10.0 / 280.0).abs() < 1e-12));

    let factors = enumerate_factors(&h, &f).unwrap();
    assert_eq!(factors.len(), 280);
    let sampler = uniform_factor_sampler(factors, 0x5A);
    let trials = 10_000u64;
    let (_, singles) = hypermatch::spread::estimate_factor_spread(
        &sampler,
        9,
        Frac::new(1, 2).unwrap(),
        trials,
        None,
    );
    let counts: std::collections::HashMap<VSet, u64> = singles.into_iter().collect();
    let mut worst = 0.0f64;
    for (e, ratio) in &ratios {
        let observed = counts.get(e).copied().unwrap_or(0) as f64 / trials as f64;
        let sigma = (ratio * (1.0 - ratio) / trials as f64).sqrt();
        let dev = (observed - ratio).abs() / sigma;
        worst = worst.max(dev);
        assert!(
            dev <= 3.0,
            "edge {:?}: observed {observed:.5}, oracle {ratio:.5}, {dev:.2}σ",
            e.to_vec()
        );
    }
    pass(
        "criterion 09 spread sanity",
        format!("84 edges within 3σ of oracle ratio 10/280 (worst {worst:.2}σ)"),
        started,
        300,
    );
}

#[test]
fn criterion_10_density_parameters() {
    let started = Instant::now();
    let tri = density_params(&PatternGraph::triangle()).unwrap();
    assert_eq!(tri.m1, Frac::new(3, 2).unwrap());
    assert!(tri.strictly_1_balanced);
    let p3 = density_params(&PatternGraph::path(3)).unwrap();
    assert_eq!(p3.m1, Frac::ONE);
    assert!(!p3.strictly_1_balanced);
    let e3 = density_params(&edge3()).unwrap();
    assert_eq!(e3.threshold.n_exponent, Frac::new(2, 1).unwrap());
    pass(
        "criterion 10 density parameters",
        "m1(K3)=3/2 strictly balanced, m1(P3)=1 not, single-3-edge exponent 2".into(),
        started,
        1,
    );
}

// sanity anchor shared by several criteria: binomial matches factorials
#[test]
fn binomial_helper_sanity() {
    assert_eq!(binomial(9, 3), 84);
    assert_eq!(binomial(24, 3), 2024);
    assert_eq!(binomial(4, 0), 1);
    assert_eq!(binomial(3, 5), 0);
}
