//! `gslab` — command-line front end for the graph sampling laboratory.
//!
//! Subcommands: `generate`, `rewire`, `sample`, `predict`, `correct`,
//! `experiment`. Exit codes: 0 success, 1 usage error, 2 data error,
//! 3 non-convergence. The `GSL_SEED` environment variable overrides every
//! `--seed` flag and config seed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gslab::estimate::EstimateError;
use gslab::experiment::{
    pipeline_on_graph, run_experiment, DistSource, ExperimentConfig, ExperimentError, Method,
    PipelineBudget,
};
use gslab::generate::{
    generate, realize_sequence, rewire_to_assortativity, rewire_to_assortativity_connected,
    DegreeSequence, GenError,
};
use gslab::graph::{write_edge_list, GraphError, Multigraph};
use gslab::sample::{
    mhrw, on_the_fly_sample, random_walk, rds, stationary_start, traverse_with_restarts,
    uniform_gc_start, uniform_sample, weighted_wor_sample, write_visits_csv, SampleError,
    SampleSequence,
};
use gslab::seed::{rng_from, ChaCha8Rng};
use gslab::theory::{BiasCurve, TheoryError};
use gslab::{correct_mhrw, correct_rw, correct_traversal, write_dist, DegreeDistribution, Dist64};

const EXIT_USAGE: i32 = 1;
const EXIT_DATA: i32 = 2;
const EXIT_NON_CONVERGENCE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "gslab",
    version,
    about = "Graph sampling laboratory: simulate, predict and correct the degree bias of graph exploration techniques",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Master seed (overridden by the GSL_SEED environment variable).
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct OutArg {
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration-model random graph and write its edge list.
    Generate {
        /// Degree distribution: a file path or `preset:NAME`
        /// (two-point, regular-K, heavy-tail).
        #[arg(long)]
        dist: String,
        /// Number of nodes.
        #[arg(long, default_value_t = 10_000)]
        nodes: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Rewire an edge list toward a target assortativity, preserving every
    /// node degree exactly.
    Rewire {
        /// Input edge list.
        graph: PathBuf,
        /// Target assortativity in (-1, 1).
        #[arg(long, allow_negative_numbers = true)]
        assortativity: f64,
        /// Acceptable |achieved - target| gap.
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        /// Proposal budget (0 = 200 per edge).
        #[arg(long, default_value_t = 0)]
        max_proposals: u64,
        /// Reject swaps that would disconnect the graph (input must be
        /// connected).
        #[arg(long)]
        connected: bool,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run one sampling method and write the visit record as CSV.
    Sample {
        /// Input edge list (omit to sample a distribution on the fly).
        graph: Option<PathBuf>,
        /// Degree distribution (file or `preset:NAME`) used when no graph is
        /// given.
        #[arg(long, conflicts_with = "graph")]
        dist: Option<String>,
        /// Node count for on-the-fly sampling.
        #[arg(long, default_value_t = 10_000)]
        nodes: usize,
        /// Method: BFS, DFS, FF[:p], SBS[:n], RW, MHRW, RDS[:n], UNI, WOR.
        #[arg(long)]
        method: String,
        /// Coverage target for traversal-like methods: fraction of reachable
        /// (positive-degree) nodes, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        f: f64,
        /// Recorded visit budget for RW/MHRW/RDS/UNI.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Discarded leading walk visits (default: 10 x node count).
        #[arg(long)]
        burn_in: Option<usize>,
        /// Start node (default: degree-weighted for traversals, uniform over
        /// the largest component for walks).
        #[arg(long)]
        start: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write the analytic traversal bias curve for a distribution.
    Predict {
        /// Degree distribution: file path or `preset:NAME`.
        #[arg(long)]
        dist: String,
        /// Comma-separated coverage grid (default: 100 uniform points).
        #[arg(long)]
        f: Option<String>,
        /// Also emit one expected-fraction column per degree.
        #[arg(long)]
        per_degree: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Correct an observed (biased) degree distribution back to an estimate
    /// of the true one.
    Correct {
        /// Observed degree distribution file.
        #[arg(long)]
        dist: PathBuf,
        /// Coverage fraction the sample reached (traversal methods).
        #[arg(long, default_value_t = 1.0)]
        f: f64,
        /// Bias law to invert: any traversal method, RW/RDS, or MHRW/UNI.
        #[arg(long, default_value = "BFS")]
        method: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a Monte Carlo experiment described by a flat key-value config
    /// file; writes summary, per-replicate and analytic-curve CSVs.
    Experiment {
        /// Config file (`key = value` lines; see README).
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the sample → observe → predict → correct pipeline to one graph
    /// and print the three-row summary.
    Pipeline {
        /// Input edge list.
        graph: PathBuf,
        /// Method: BFS, DFS, FF[:p], SBS[:n], RW, MHRW, RDS[:n], UNI, WOR.
        #[arg(long)]
        method: String,
        /// Coverage target for traversal-like methods.
        #[arg(long)]
        f: Option<f64>,
        /// Visit budget for walk methods.
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
}

/// An error message plus the exit code it maps to.
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }

    fn non_convergence(message: impl Into<String>) -> Self {
        Self { code: EXIT_NON_CONVERGENCE, message: message.into() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<gslab::DistError> for CliError {
    fn from(e: gslab::DistError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::BadTarget | GenError::BadTolerance => CliError::usage(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::BadStopFraction
            | SampleError::BadFireProbability
            | SampleError::BadSnowballCount
            | SampleError::BadReferralCount
            | SampleError::BadSteps
            | SampleError::BurnInTooLong
            | SampleError::BadSampleSize => CliError::usage(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        match e {
            TheoryError::NoConvergence { .. } => CliError::non_convergence(e.to_string()),
            TheoryError::BadCoverage | TheoryError::BadT | TheoryError::BadGrid => {
                CliError::usage(e.to_string())
            }
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::NoConvergence { .. } => CliError::non_convergence(e.to_string()),
            EstimateError::BadCoverage => CliError::usage(e.to_string()),
            EstimateError::Theory(t) => t.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config { .. } | ExperimentError::Invalid(_) => {
                CliError::usage(e.to_string())
            }
            ExperimentError::Theory(t) => t.into(),
            ExperimentError::Estimate(est) => est.into(),
            ExperimentError::Gen(g) => g.into(),
            ExperimentError::Sample(s) => s.into(),
            other => CliError::data(other.to_string()),
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// `GSL_SEED` overrides any seed given on the command line or in a config.
fn resolve_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("GSL_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("GSL_SEED must be a 64-bit unsigned integer, got {text:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(flag),
        Err(e) => Err(CliError::usage(format!("GSL_SEED: {e}"))),
    }
}

fn out_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(std::io::stdout()))),
    }
}

fn load_dist(text: &str) -> Result<Dist64, CliError> {
    DistSource::parse(text).resolve().map_err(CliError::from)
}

fn load_graph(path: &Path) -> Result<Multigraph, CliError> {
    Multigraph::load(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn parse_method(text: &str) -> Result<Method, CliError> {
    Method::parse(text).map_err(|e| CliError::usage(e.to_string()))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { dist, nodes, seed, out } => {
            let dist = load_dist(&dist)?;
            let mut rng = rng_from(resolve_seed(seed.seed)?);
            let (seq, _) = realize_sequence(&dist, nodes, &mut rng)?;
            let g = generate(&seq, &mut rng)?;
            let mut w = out_writer(&out.out)?;
            write_edge_list(&mut w, &g)?;
            w.flush()?;
            Ok(())
        }
        Command::Rewire { graph, assortativity, tol, max_proposals, connected, seed, out } => {
            let g = load_graph(&graph)?;
            let mut rng = rng_from(resolve_seed(seed.seed)?);
            let budget = if max_proposals == 0 {
                200 * g.edge_count().max(1) as u64
            } else {
                max_proposals
            };
            let outcome = if connected {
                rewire_to_assortativity_connected(&g, assortativity, tol, budget, &mut rng)?
            } else {
                rewire_to_assortativity(&g, assortativity, tol, budget, &mut rng)?
            };
            let mut w = out_writer(&out.out)?;
            write_edge_list(&mut w, &outcome.graph)?;
            w.flush()?;
            eprintln!(
                "achieved r = {:.6} (target {assortativity}, {} proposals, {} accepted)",
                outcome.achieved_r, outcome.proposals, outcome.accepted
            );
            if !outcome.converged {
                return Err(CliError::non_convergence(format!(
                    "target assortativity {assortativity} not reached within tolerance {tol}: got {:.6}",
                    outcome.achieved_r
                )));
            }
            Ok(())
        }
        Command::Sample { graph, dist, nodes, method, f, steps, burn_in, start, seed, out } => {
            let method = parse_method(&method)?;
            let mut rng = rng_from(resolve_seed(seed.seed)?);
            let seq = match (&graph, &dist) {
                (Some(path), None) => {
                    let g = load_graph(path)?;
                    sample_on_graph(&g, method, f, steps, burn_in, start, &mut rng)?
                }
                (None, Some(source)) => {
                    let d = load_dist(source)?;
                    if method.is_traversal_like() && !matches!(method, Method::WorOracle) {
                        // Every traversal shares one visit law on a
                        // configuration-model graph, simulated directly
                        // from the distribution.
                        on_the_fly_sample(&d, nodes, f, &mut rng)?
                    } else if matches!(method, Method::WorOracle) {
                        let (seq, _) = realize_sequence(&d, nodes, &mut rng)?;
                        let avail = seq.degrees().iter().filter(|&&k| k > 0).count();
                        let m = (((f * avail as f64).ceil() as usize).max(1)).min(avail);
                        weighted_wor_sample(&seq, m, &mut rng)?
                    } else {
                        let (seq, _) = realize_sequence(&d, nodes, &mut rng)?;
                        let g = generate(&seq, &mut rng)?;
                        sample_on_graph(&g, method, f, steps, burn_in, start, &mut rng)?
                    }
                }
                _ => {
                    return Err(CliError::usage(
                        "give exactly one input: an edge-list path or --dist",
                    ))
                }
            };
            let mut w = out_writer(&out.out)?;
            write_visits_csv(&mut w, &seq)?;
            w.flush()?;
            eprintln!("{} visits, coverage {:.6}", seq.len(), seq.coverage());
            Ok(())
        }
        Command::Predict { dist, f, per_degree, out } => {
            let d = load_dist(&dist)?;
            let grid = match f {
                Some(list) => parse_f_list(&list)?,
                None => (1..=100).map(|i| i as f64 / 100.0).collect(),
            };
            let curve = BiasCurve::compute(&d, &grid)?;
            let mut w = out_writer(&out.out)?;
            curve.write_csv(&mut w, per_degree)?;
            w.flush()?;
            Ok(())
        }
        Command::Correct { dist, f, method, out } => {
            let method = parse_method(&method)?;
            let observed: Dist64 = DegreeDistribution::load(&dist)
                .map_err(|e| CliError::data(format!("{}: {e}", dist.display())))?;
            let corrected = if method.is_traversal_like() {
                let (p_hat, t_star, iterations) = correct_traversal(&observed, f)?;
                eprintln!(
                    "t* = {t_star:.6} ({iterations} bisection iterations), corrected mean {:.6}",
                    p_hat.mean()
                );
                p_hat
            } else {
                match method {
                    Method::Rw | Method::Rds(_) => {
                        let p_hat = correct_rw(&observed)?;
                        eprintln!("corrected mean {:.6}", p_hat.mean());
                        p_hat
                    }
                    Method::Mhrw | Method::Uniform => {
                        let p_hat = correct_mhrw(&observed);
                        eprintln!("corrected mean {:.6}", p_hat.mean());
                        p_hat
                    }
                    _ => unreachable!("traversal-like handled above"),
                }
            };
            let mut w = out_writer(&out.out)?;
            write_dist(&mut w, &corrected)?;
            w.flush()?;
            Ok(())
        }
        Command::Experiment { config, seed, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::data(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_key_values(&text)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            cfg.master_seed = resolve_seed(cfg.master_seed)?;
            if let Some(path) = out {
                cfg.out = Some(path);
            }
            let result = run_experiment(&cfg)?;
            match &cfg.out {
                Some(path) => {
                    let mut w = out_writer(&cfg.out)?;
                    result.write_summary_csv(&mut w)?;
                    w.flush()?;
                    let reps = sibling(path, "_replicates");
                    let mut wr = out_writer(&Some(reps.clone()))?;
                    result.write_replicates_csv(&mut wr)?;
                    wr.flush()?;
                    let curve = sibling(path, "_curve");
                    let mut wc = out_writer(&Some(curve.clone()))?;
                    result.curve.write_csv(&mut wc, false)?;
                    wc.flush()?;
                    eprintln!(
                        "wrote {}, {}, {}",
                        path.display(),
                        reps.display(),
                        curve.display()
                    );
                }
                None => {
                    let mut w = out_writer(&None)?;
                    result.write_summary_csv(&mut w)?;
                    w.flush()?;
                }
            }
            if let Some(report) = &result.rewire {
                if report.converged_replicates < report.replicates {
                    eprintln!(
                        "warning: rewiring converged in only {}/{} replicates",
                        report.converged_replicates, report.replicates
                    );
                }
            }
            Ok(())
        }
        Command::Pipeline { graph, method, f, steps, seed, out } => {
            let g = load_graph(&graph)?;
            let method = parse_method(&method)?;
            let budget = match (f, steps) {
                (Some(f), None) => PipelineBudget::Coverage(f),
                (None, Some(s)) => PipelineBudget::Steps(s),
                (None, None) => {
                    if method.is_traversal_like() {
                        PipelineBudget::Coverage(0.1)
                    } else {
                        PipelineBudget::Steps(10_000)
                    }
                }
                (Some(_), Some(_)) => {
                    return Err(CliError::usage("give --f or --steps, not both"))
                }
            };
            let summary = pipeline_on_graph(&g, method, budget, resolve_seed(seed.seed)?)?;
            let mut w = out_writer(&out.out)?;
            writeln!(w, "row,value")?;
            writeln!(w, "sampled,{:.16e}", summary.observed_mean)?;
            writeln!(w, "expected,{:.16e}", summary.expected_mean)?;
            writeln!(w, "corrected,{:.16e}", summary.corrected_mean)?;
            writeln!(w, "coverage,{:.16e}", summary.coverage)?;
            writeln!(w, "visits,{}", summary.visits)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn sample_on_graph(
    g: &Multigraph,
    method: Method,
    f: f64,
    steps: usize,
    burn_in: Option<usize>,
    start: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<SampleSequence, CliError> {
    if method.is_traversal_like() {
        if let Some(policy) = traversal_policy_of(method) {
            let start = match start {
                Some(v) => v,
                None => stationary_start(g, rng)?,
            };
            Ok(traverse_with_restarts(g, policy, start, f, rng)?)
        } else {
            let degrees = g.degrees();
            let avail = degrees.iter().filter(|&&k| k > 0).count();
            let m = (((f * avail as f64).ceil() as usize).max(1)).min(avail);
            Ok(weighted_wor_sample(&DegreeSequence::new(degrees), m, rng)?)
        }
    } else {
        if matches!(method, Method::Uniform) {
            return Ok(uniform_sample(g, steps, rng)?);
        }
        let start = match start {
            Some(v) => v,
            None => uniform_gc_start(g, rng)?,
        };
        let burn = burn_in.unwrap_or(10 * g.node_count());
        Ok(match method {
            Method::Rw => random_walk(g, start, steps + burn, burn, rng)?,
            Method::Mhrw => mhrw(g, start, steps + burn, burn, rng)?,
            Method::Rds(refs) => rds(g, start, refs, steps, rng)?,
            _ => unreachable!("remaining methods handled above"),
        })
    }
}

fn traversal_policy_of(method: Method) -> Option<gslab::TraversalPolicy> {
    match method {
        Method::Bfs => Some(gslab::TraversalPolicy::Bfs),
        Method::Dfs => Some(gslab::TraversalPolicy::Dfs),
        Method::ForestFire(p) => Some(gslab::TraversalPolicy::ForestFire(p)),
        Method::Snowball(n) => Some(gslab::TraversalPolicy::Snowball(n)),
        _ => None,
    }
}

fn parse_f_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("bad coverage value {s:?}")))
        })
        .collect()
}

/// `results.csv` → `results_suffix.csv` next to the original.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}
