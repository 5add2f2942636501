//! Command-line surface: reproducible experiments over the library with
//! stable JSON/CSV report formats. All verdicts (including Reject) exit 0;
//! domain errors exit 1; usage errors exit 2.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypermatch::cluster::{self, ClassifyThresholds, PipelineParams};
use hypermatch::decision::{
    self, count_perfect_matchings, procedure_perfect_matching, ProcedureParams, SparsifiedOracle,
};
use hypermatch::error::Error;
use hypermatch::frac::Frac;
use hypermatch::hypergraph::{
    complete_kgraph, divisibility_barrier, random_kgraph, random_kgraph_min_codegree, Hypergraph,
};
use hypermatch::lattice::{CosetContext, IntegerLattice};
use hypermatch::mc::{mc_threshold, subset_inheritance_test, threshold_csv, InheritedProperty};
use hypermatch::partition::{IndexVector, VertexPartition};
use hypermatch::pattern::PatternGraph;
use hypermatch::report::{envelope, write_atomic};
use hypermatch::robustness::{
    build_partition, robust_profile, verify_partition, BuildParams, VerifyParams,
};
use hypermatch::spread::estimate_vertex_spread;

#[derive(Parser)]
#[command(
    name = "hypermatch",
    version,
    about = "Perfect matchings in sparsified dense hypergraphs: exact oracles, lattice analysis, decision runs, Monte Carlo experiments"
)]
struct Cli {
    /// Worker threads for Monte Carlo subcommands (default: HYPERMATCH_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph file.
    Gen(GenArgs),
    /// Basic statistics: sizes and minimum degrees.
    Analyze(AnalyzeArgs),
    /// Build (and optionally verify) a reachability partition.
    Partition(PartitionArgs),
    /// Robust-vector lattice: basis, coset group, residue table.
    Lattice(LatticeArgs),
    /// Run the sparsified perfect-matching decision procedure.
    Decide(DecideArgs),
    /// Exact perfect-matching count.
    Count(CountArgs),
    /// Monte Carlo threshold curve over a probability grid.
    Mc(McArgs),
    /// Randomized cluster pipeline trials (factor assembly).
    ClusterSim(ClusterSimArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum GenKind {
    Complete,
    Barrier,
    Random,
    RandomMinCodegree,
}

#[derive(Args, serde::Serialize)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Barrier class size |X|.
    #[arg(long)]
    x: Option<usize>,
    /// Edge probability for random kinds.
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// Codegree floor for random-min-codegree.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    tries: u32,
    /// Output hypergraph file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct PartitionArgs {
    #[arg(long)]
    input: PathBuf,
    /// Density margin γ (δ_{k−1} ≥ n/k + γn is the intended regime).
    #[arg(long, default_value = "0.02")]
    gamma: Frac,
    #[arg(long, default_value = "0.001")]
    mu: Frac,
    #[arg(long, default_value = "0.01")]
    epsilon: Frac,
    #[arg(long, default_value = "0.001")]
    beta1: Frac,
    /// Merge fraction for the reachability merging stage.
    #[arg(long, default_value = "0.5")]
    rho: Frac,
    /// Use the cheap degree-based pair test instead of exact reachability.
    #[arg(long)]
    cheap_pair_test: bool,
    #[arg(long, default_value_t = 1)]
    relocation_min: u64,
    /// Closedness constants recorded for verification.
    #[arg(long, default_value = "0.001")]
    beta: Frac,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Verify the built partition and embed the report.
    #[arg(long)]
    verify: bool,
    /// Where to write the partition file.
    #[arg(long)]
    out_partition: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct LatticeArgs {
    /// Inline generators, e.g. "3,0;1,2".
    #[arg(long)]
    vectors: Option<String>,
    /// Hypergraph + partition + μ: use the robust-vector lattice.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, default_value = "0.001")]
    mu: Frac,
    /// Block size r of the ambient divisibility lattice (defaults to k).
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct DecideArgs {
    #[arg(long)]
    input: PathBuf,
    /// Partition file; builds one when omitted.
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "0.001")]
    eta: Frac,
    #[arg(long, default_value = "0.001")]
    mu: Frac,
    #[arg(long, default_value = "0.02")]
    gamma: Frac,
    /// Greedily extend an accepting matching across robust vectors
    /// (the default).
    #[arg(long, overrides_with = "no_extend")]
    extend: bool,
    /// Leave an accepting matching unextended.
    #[arg(long)]
    no_extend: bool,
    /// Cross-check the verdict against the exact oracle on the
    /// sparsification (and the extension remainder against the host).
    #[arg(long)]
    verify_with_oracle: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum InheritKind {
    Codegree,
    RobustCopies,
    RobustLinks,
    Reachability,
}

#[derive(Args, serde::Serialize)]
struct McArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated probability grid, e.g. "0,0.05,0.2,1".
    #[arg(long, required_unless_present = "inherit")]
    p_grid: Option<String>,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the curve as CSV (columns p,trials,successes,lower,upper).
    #[arg(long)]
    output_csv: Option<PathBuf>,
    /// Run a subset-inheritance experiment instead of the threshold curve.
    #[arg(long, value_enum)]
    inherit: Option<InheritKind>,
    /// Partition file for inheritance properties (trivial when omitted).
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Subset size ℓ for inheritance sampling.
    #[arg(long, default_value_t = 8)]
    ell: usize,
    /// Host-side constant of the inherited property.
    #[arg(long, default_value = "0.1")]
    level: Frac,
    /// Subset-side (weaker) constant.
    #[arg(long, default_value = "0.05")]
    level_prime: Frac,
    #[arg(long, default_value = "0.001")]
    mu: Frac,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
struct ClusterSimArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Cluster scale C.
    #[arg(long)]
    c: usize,
    /// Solubility bound q (defaults to the part count when the degree and
    /// part-size floors hold, else the k-vector count).
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "0.001")]
    mu: Frac,
    #[arg(long, default_value = "0.01")]
    epsilon: Frac,
    #[arg(long, default_value = "0.02")]
    gamma: Frac,
    #[arg(long, default_value = "0.001")]
    beta: Frac,
    #[arg(long, default_value_t = 100)]
    retry_cap: u32,
    /// Give every kept cluster a bridging robust copy.
    #[arg(long)]
    bridge_all: bool,
    /// Estimate vertex spread over the trial outcomes.
    #[arg(long)]
    spread: bool,
    /// Estimate copy-containment (factor) spread over the trial outcomes.
    #[arg(long)]
    factor_spread: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("HYPERMATCH_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &Path) -> Result<Hypergraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Domain(e.into()))?;
    let parsed = Hypergraph::parse(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.graph)
}

fn load_partition(path: &Path) -> Result<VertexPartition, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Domain(e.into()))?;
    Ok(VertexPartition::parse(&text)?)
}

fn emit(
    command: &str,
    config: Value,
    result: Value,
    started: Instant,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let report = envelope(command, config, result, started.elapsed().as_millis());
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    match output {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn config_of<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("serializable args")
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen(args) => {
            let started = Instant::now();
            let h = match args.kind {
                GenKind::Complete => complete_kgraph(args.n, args.k)?,
                GenKind::Barrier => {
                    let x = args.x.ok_or_else(|| {
                        CliError::Usage("--x is required for --kind barrier".into())
                    })?;
                    divisibility_barrier(args.n, args.k, x)?
                }
                GenKind::Random => random_kgraph(args.n, args.k, args.edge_prob, args.seed)?,
                GenKind::RandomMinCodegree => {
                    let delta = args.delta.ok_or_else(|| {
                        CliError::Usage("--delta is required for --kind random-min-codegree".into())
                    })?;
                    random_kgraph_min_codegree(
                        args.n,
                        args.k,
                        args.edge_prob,
                        delta,
                        args.seed,
                        args.tries,
                    )?
                }
            };
            let text = h.to_text();
            match &args.output {
                Some(path) => write_atomic(path, &text)?,
                None => print!("{text}"),
            }
            eprintln!(
                "generated {:?} with {} edges in {} ms",
                args.kind,
                h.edge_count(),
                started.elapsed().as_millis()
            );
            Ok(())
        }
        Command::Analyze(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let mut degrees = serde_json::Map::new();
            for ell in 1..h.k() {
                degrees.insert(format!("min_degree_{ell}"), json!(h.min_degree(ell)?));
            }
            let result = json!({
                "k": h.k(),
                "n": h.n(),
                "edges": h.edge_count(),
                "degrees": degrees,
            });
            emit(
                "analyze",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::Partition(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let f = PatternGraph::single_edge(h.k());
            let mut params = BuildParams::defaults(args.gamma, h.k())?;
            params.mu = args.mu;
            params.epsilon = args.epsilon;
            params.beta1 = args.beta1;
            params.rho = args.rho;
            params.exact_reachability = !args.cheap_pair_test;
            params.relocation_min_sets = args.relocation_min;
            params.beta = args.beta;
            params.t = args.t;
            let out = build_partition(&h, &f, &params)?;
            if let Some(path) = &args.out_partition {
                write_atomic(path, &out.good.partition.to_text())?;
            }
            let verify = if args.verify {
                let vp = VerifyParams::from_good(&out.good, args.epsilon, args.mu);
                Some(verify_partition(&h, &f, &out.good, &vp)?)
            } else {
                None
            };
            let result = json!({
                "d": out.good.partition.d(),
                "part_sizes": out.good.partition.parts().iter().map(|p| p.len()).collect::<Vec<_>>(),
                "assignment": out.good.partition.assignment(),
                "robust_vectors": out.profile.robust_vectors,
                "robust_threshold": out.profile.threshold.to_string(),
                "diagnostics": serde_json::to_value(&out.diagnostics).expect("serializable"),
                "build_params": serde_json::to_value(&params).expect("serializable"),
                "verification": verify.map(|v| serde_json::to_value(&v).expect("serializable")),
            });
            emit(
                "partition",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::Lattice(args) => {
            let started = Instant::now();
            let (dim, r, generators): (usize, i64, Vec<IndexVector>) =
                match (&args.vectors, &args.input) {
                    (Some(list), _) => {
                        let gens = parse_vectors(list).map_err(CliError::Usage)?;
                        let dim = gens.first().map(|g| g.dim()).unwrap_or(1);
                        let r = args
                            .r
                            .unwrap_or_else(|| gens.first().map(|g| g.weight()).unwrap_or(1));
                        (dim, r, gens)
                    }
                    (None, Some(input)) => {
                        let h = load_graph(input)?;
                        let p = match &args.partition {
                            Some(path) => load_partition(path)?,
                            None => VertexPartition::trivial(h.n()),
                        };
                        let f = PatternGraph::single_edge(h.k());
                        let profile = robust_profile(&h, &f, &p, args.mu)?;
                        (
                            p.d(),
                            args.r.unwrap_or(h.k() as i64),
                            profile.robust_vectors,
                        )
                    }
                    (None, None) => {
                        return Err(CliError::Usage(
                            "provide either --vectors or --input (with optional --partition)"
                                .into(),
                        ))
                    }
                };
            let lattice = IntegerLattice::from_generators(dim, &generators)?;
            let ctx = CosetContext::new(&lattice, r)?;
            let classes = ctx.class_representatives(512)?;
            let result = json!({
                "dim": dim,
                "r": r,
                "generators": generators,
                "basis": lattice.basis(),
                "rank": lattice.rank(),
                "coset_group": serde_json::to_value(ctx.group()).expect("serializable"),
                "residue_classes": classes,
            });
            emit(
                "lattice",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::Decide(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let f = PatternGraph::single_edge(h.k());
            let partition = match &args.partition {
                Some(path) => load_partition(path)?,
                None => {
                    let params = BuildParams::defaults(args.gamma, h.k())?;
                    build_partition(&h, &f, &params)?.good.partition
                }
            };
            let profile = robust_profile(&h, &f, &partition, args.mu)?;
            let mut oracle = SparsifiedOracle::new(&h, args.p, args.seed)?;
            let present_edges = oracle.present_count();
            let outcome = procedure_perfect_matching(
                &h,
                &partition,
                &profile,
                &ProcedureParams {
                    eta: args.eta,
                    extend: !args.no_extend,
                    extension_reveal_cap: None,
                },
                &mut oracle,
            )?;
            let oracle_check = if args.verify_with_oracle {
                let hp = h.sparsify(args.p, args.seed)?;
                let sparsified_pm = count_perfect_matchings(&hp).count > 0;
                let consistent_reject =
                    outcome.verdict != decision::Verdict::Reject || !sparsified_pm;
                Some(json!({
                    "sparsified_pm_exists": sparsified_pm,
                    "reject_consistent": consistent_reject,
                }))
            } else {
                None
            };
            let result = json!({
                "d": partition.d(),
                "part_sizes": partition.parts().iter().map(|p| p.len()).collect::<Vec<_>>(),
                "present_edges": present_edges,
                "outcome": serde_json::to_value(&outcome).expect("serializable"),
                "revealed_edge_count": outcome.revealed_edges.len(),
                "oracle_check": oracle_check,
            });
            emit(
                "decide",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::Count(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let res = count_perfect_matchings(&h);
            let result = json!({
                "perfect_matchings": res.count as u64,
                "divisible": res.divisible,
            });
            emit(
                "count",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::Mc(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let f = PatternGraph::single_edge(h.k());
            if let Some(kind) = args.inherit {
                let p = match &args.partition {
                    Some(path) => load_partition(path)?,
                    None => VertexPartition::trivial(h.n()),
                };
                let profile = robust_profile(&h, &f, &p, args.mu)?;
                let property = match kind {
                    InheritKind::Codegree => InheritedProperty::Codegree {
                        d: h.k() - 1,
                        delta: Frac::new(1, h.k() as u64)?,
                        gamma: args.level,
                        gamma_prime: args.level_prime,
                    },
                    InheritKind::RobustCopies => {
                        // the most plentiful vector, so the hypothesis bites
                        let vector = profile
                            .raw_counts
                            .iter()
                            .max_by_key(|(_, &c)| c)
                            .map(|(v, _)| v.clone())
                            .ok_or_else(|| CliError::Usage("host has no copies".into()))?;
                        InheritedProperty::RobustCopies {
                            vector,
                            gamma: args.level,
                            gamma_prime: args.level_prime,
                        }
                    }
                    InheritKind::RobustLinks => InheritedProperty::RobustLinks {
                        vertex: 0,
                        mu: args.mu,
                        gamma: args.level,
                        gamma_prime: args.level_prime,
                    },
                    InheritKind::Reachability => InheritedProperty::Reachability {
                        part: 0,
                        beta: args.level,
                        beta_prime: args.level_prime,
                        t: 1,
                    },
                };
                let report = subset_inheritance_test(
                    &h,
                    &f,
                    &p,
                    &profile,
                    &property,
                    args.ell,
                    args.trials,
                    args.seed,
                )?;
                let result = serde_json::to_value(&report).expect("serializable");
                return emit(
                    "mc",
                    config_of(&args),
                    result,
                    started,
                    args.output.as_deref(),
                );
            }
            let grid: Vec<f64> = args
                .p_grid
                .as_deref()
                .expect("clap enforces p-grid without --inherit")
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Usage(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let points = mc_threshold(&h, &f, &grid, args.trials, args.seed)?;
            if let Some(path) = &args.output_csv {
                write_atomic(path, &threshold_csv(&points))?;
            }
            let result = json!({
                "points": points,
                "csv": args.output_csv.as_ref().map(|p| p.display().to_string()),
            });
            emit(
                "mc",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
        Command::ClusterSim(args) => {
            let started = Instant::now();
            let h = load_graph(&args.input)?;
            let f = PatternGraph::single_edge(h.k());
            let partition = match &args.partition {
                Some(path) => load_partition(path)?,
                None => {
                    let params = BuildParams::defaults(args.gamma, h.k())?;
                    build_partition(&h, &f, &params)?.good.partition
                }
            };
            let profile = robust_profile(&h, &f, &partition, args.mu)?;
            let min_part = Frac::new(1, (2 * h.k()) as u64)?;
            let q = match args.q {
                Some(q) => q,
                None => decision::solubility_bound(&h, &partition, min_part)?,
            };
            let thresholds = ClassifyThresholds::derive(
                min_part,
                args.epsilon,
                args.gamma,
                args.beta,
                args.mu,
                Frac::new(1, h.k() as u64)?,
                h.k() - 1,
                1,
                f.r(),
                q,
                partition.d(),
                args.c,
            )?;
            let mut params = PipelineParams::new(args.c, q, args.seed, thresholds);
            params.retry_cap = args.retry_cap;
            params.bridge_all = args.bridge_all;
            let window_count = cluster::window_plan(h.n(), args.c)?.0.len();
            let mut successes = 0u64;
            let mut failures: Vec<Value> = Vec::new();
            let mut first_plan: Option<Value> = None;
            let mut assignments: Vec<Option<Vec<usize>>> = Vec::new();
            let mut witnesses: Vec<Option<Vec<hypermatch::bitset::VSet>>> = Vec::new();
            for trial in 0..args.trials {
                let mut tp = params.clone();
                tp.seed = hypermatch::rng::derive_seed(args.seed, trial);
                match cluster::sample_f_factor(&h, &f, &partition, &profile, &tp) {
                    Ok(run) => {
                        successes += 1;
                        if first_plan.is_none() {
                            first_plan =
                                Some(serde_json::to_value(&run.plan).expect("serializable"));
                        }
                        let mut assign = vec![0usize; h.n()];
                        for (pos, cl) in run.plan.clusters.iter().enumerate() {
                            for v in cl.iter() {
                                assign[v as usize] = pos;
                            }
                        }
                        assignments.push(Some(assign));
                        witnesses.push(Some(run.witness.copies.clone()));
                    }
                    Err(e) => {
                        failures.push(json!({
                            "trial": trial,
                            "stage": format!("{:?}", e.stage),
                            "attempts": e.attempts,
                            "detail": e.detail,
                        }));
                        assignments.push(None);
                        witnesses.push(None);
                    }
                }
            }
            let spread = if args.spread {
                Some(estimate_vertex_spread(
                    |t| assignments[t as usize].clone(),
                    h.n(),
                    window_count,
                    args.trials,
                    None,
                ))
            } else {
                None
            };
            let factor_spread = if args.factor_spread {
                let m1 = Frac::new(1, (h.k() - 1) as u64)?;
                let (est, _) = hypermatch::spread::estimate_factor_spread(
                    |t| witnesses[t as usize].clone(),
                    h.n(),
                    m1,
                    args.trials,
                    None,
                );
                Some(est)
            } else {
                None
            };
            let result = json!({
                "trials": args.trials,
                "successes": successes,
                "q": q,
                "failures": failures,
                "first_success_plan": first_plan,
                "vertex_spread": spread.map(|s| serde_json::to_value(&s).expect("serializable")),
                "factor_spread": factor_spread.map(|s| serde_json::to_value(&s).expect("serializable")),
            });
            emit(
                "cluster-sim",
                config_of(&args),
                result,
                started,
                args.output.as_deref(),
            )
        }
    }
}

fn parse_vectors(list: &str) -> Result<Vec<IndexVector>, String> {
    let mut out = Vec::new();
    for part in list.split(';') {
        let coords: Result<Vec<i64>, _> =
            part.split(',').map(|c| c.trim().parse::<i64>()).collect();
        out.push(IndexVector(
            coords.map_err(|e| format!("bad vector `{part}`: {e}"))?,
        ));
    }
    if out.is_empty() {
        return Err("no vectors given".into());
    }
    let dim = out[0].dim();
    if out.iter().any(|v| v.dim() != dim) {
        return Err("vectors have mixed dimensions".into());
    }
    Ok(out)
}
