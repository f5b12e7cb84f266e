//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 sampling budget exhausted,
//! 3 invariant violation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rrtsharp_core::planner::{
    run, AlgorithmVariant, AnyPlanner, CostHistory, GraphSnapshot, Planner, PlannerParams, RrtSharp,
};
use rrtsharp_core::{PlanError, Scenario, SeededRng};

use crate::bench::{self, Experiment};
use crate::dump::write_dump;
use crate::scenario_file;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Invalid(String),
    Sampling(PlanError),
    Invariant { message: String, dump: String },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Sampling(_) => 2,
            Failure::Invariant { .. } => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) => f.write_str(m),
            Failure::Sampling(e) => write!(f, "{e}"),
            Failure::Invariant { message, .. } => f.write_str(message),
        }
    }
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        Failure::Sampling(e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Invalid(format!("cannot write {}: {e}", path.display()))
}

#[derive(Parser, Debug)]
#[command(name = "rrtsharp", version, about = "RRT# and RRT* motion planning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plan once and write history, path and tree snapshots.
    Run(RunArgs),
    /// Run Monte Carlo trials of several planners and write statistics.
    Compare(CompareArgs),
    /// Plan while checking the planner's invariants against oracles.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct Shared {
    /// Scenario file, or `bundled:<name>`.
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Steering radius (default: a tenth of the longest bounds side).
    #[arg(long)]
    eta: Option<f64>,
    /// Connection radius scale (default: derived from the free volume).
    #[arg(long)]
    gamma: Option<f64>,
    /// Iterations between history samples.
    #[arg(long, default_value_t = 10)]
    stride: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, default_value = "rrtsharp-v0", value_parser = parse_variant)]
    algo: AlgorithmVariant,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long)]
    out: PathBuf,
    /// Iterations at which to dump the graph (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    snapshot: Vec<usize>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    shared: Shared,
    /// Planners to compare (comma-separated or repeated).
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_variant)]
    algo: Vec<AlgorithmVariant>,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, default_value = "rrtsharp-v0", value_parser = parse_variant)]
    algo: AlgorithmVariant,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Directory for the dump written when a check fails (default: stderr).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn parse_variant(s: &str) -> Result<AlgorithmVariant, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub algorithm: AlgorithmVariant,
    pub iterations: usize,
    pub seed: u64,
    pub eta: Option<f64>,
    pub gamma_override: Option<f64>,
    pub history_stride: usize,
    pub output_dir: PathBuf,
    pub snapshot_at: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub scenario: String,
    pub variants: Vec<AlgorithmVariant>,
    pub iterations: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub eta: Option<f64>,
    pub gamma_override: Option<f64>,
    pub history_stride: usize,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub scenario: String,
    pub algorithm: AlgorithmVariant,
    pub iterations: usize,
    pub seed: u64,
    pub eta: Option<f64>,
    pub gamma_override: Option<f64>,
    pub stride: usize,
    pub output_dir: Option<PathBuf>,
    pub inject_fault: bool,
}

fn load_scenario(location: &str) -> Result<Scenario, Failure> {
    scenario_file::load(location)
        .map(|(s, _)| s)
        .map_err(|e| Failure::Invalid(format!("{location}: {e}")))
}

fn planner_params(scenario: &Scenario, eta: Option<f64>, gamma: Option<f64>) -> Result<PlannerParams, Failure> {
    let mut params = PlannerParams::for_scenario(scenario);
    for (name, value) in [("--eta", eta), ("--gamma", gamma)] {
        if let Some(x) = value {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Failure::Invalid(format!("{name} must be a positive number, got {x}")));
            }
        }
    }
    if let Some(eta) = eta {
        params = params.with_eta(eta);
    }
    if let Some(gamma) = gamma {
        params = params.with_gamma(gamma);
    }
    Ok(params)
}

fn positive(name: &str, value: usize) -> Result<(), Failure> {
    if value == 0 {
        return Err(Failure::Invalid(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| io_failure(&path, e))
}

/// `iteration,best_cost` rows. Wall-clock times go to [`timing_csv`] so
/// this file depends only on the scenario and configuration.
pub fn history_csv(history: &CostHistory) -> String {
    let mut out = String::from("iteration,best_cost\n");
    for s in history.samples() {
        writeln!(out, "{},{}", s.iteration, s.best_cost).unwrap();
    }
    out
}

pub fn timing_csv(history: &CostHistory) -> String {
    let mut out = String::from("iteration,elapsed_s\n");
    for s in history.samples() {
        writeln!(out, "{},{}", s.iteration, s.elapsed_seconds).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub best_cost: f64,
    pub vertices: usize,
    pub path_length: usize,
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary, Failure> {
    let scenario = load_scenario(&cfg.scenario)?;
    let params = planner_params(&scenario, cfg.eta, cfg.gamma_override)?;
    positive("--stride", cfg.history_stride)?;
    let mut snapshot_at = cfg.snapshot_at.clone();
    snapshot_at.sort_unstable();
    snapshot_at.dedup();
    if let Some(&k) = snapshot_at.iter().find(|&&k| k > cfg.iterations) {
        return Err(Failure::Invalid(format!(
            "--snapshot {k} is beyond --iters {}",
            cfg.iterations
        )));
    }

    let start = Instant::now();
    let clock = move || start.elapsed().as_secs_f64();
    let planner = AnyPlanner::new(scenario.clone(), cfg.algorithm, params, SeededRng::new(cfg.seed));
    let mut snapshots: BTreeMap<usize, GraphSnapshot> = BTreeMap::new();
    let result = run(planner, cfg.iterations, cfg.history_stride, &clock, |p| {
        if snapshot_at.binary_search(&p.iteration()).is_ok() {
            snapshots.insert(p.iteration(), p.snapshot());
        }
    })?;

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    write_file(dir, "history.csv", &history_csv(&result.cost_history))?;
    write_file(dir, "timing.csv", &timing_csv(&result.cost_history))?;
    let mut path = String::new();
    for v in &result.best_path {
        let coords = &result.snapshot.vertices[v.0].coords;
        let line: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        writeln!(path, "{}", line.join(", ")).unwrap();
    }
    write_file(dir, "path.txt", &path)?;
    for (k, snapshot) in &snapshots {
        write_file(dir, &format!("tree_{k}.txt"), &write_dump(snapshot))?;
    }
    Ok(RunSummary {
        best_cost: result.best_cost,
        vertices: result.snapshot.vertices.len(),
        path_length: result.best_path.len(),
    })
}

pub fn cmd_compare(cfg: &CompareConfig) -> Result<BTreeMap<AlgorithmVariant, bench::VariantRuns>, Failure> {
    let scenario = load_scenario(&cfg.scenario)?;
    let params = planner_params(&scenario, cfg.eta, cfg.gamma_override)?;
    positive("--stride", cfg.history_stride)?;
    positive("--trials", cfg.trials)?;
    if cfg.variants.is_empty() {
        return Err(Failure::Invalid("--algo needs at least one planner".into()));
    }
    let mut exp = Experiment::new(scenario, cfg.trials, cfg.iterations, cfg.base_seed).with_stride(cfg.history_stride);
    exp.params = params;

    let runs = bench::run_trials(&exp, &cfg.variants);
    if let Some((_, r)) = runs.iter().find(|(_, r)| r.records.is_empty()) {
        let (_, e) = &r.failures[0];
        return Err(Failure::Sampling(e.clone()));
    }
    let ratios = bench::time_ratio(&exp, &cfg.variants);

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    write_file(dir, "stats.csv", &bench::stats_csv(&runs))?;
    if let Some(normalized) = bench::normalized_stats_csv(&runs) {
        write_file(dir, "stats_normalized.csv", &normalized)?;
    }
    write_file(dir, "time_ratio.csv", &bench::time_ratio_csv(&ratios))?;
    Ok(runs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub checkpoints: usize,
    pub vertices: usize,
    pub best_cost: f64,
}

pub fn cmd_check(cfg: &CheckConfig) -> Result<CheckSummary, Failure> {
    let scenario = load_scenario(&cfg.scenario)?;
    let params = planner_params(&scenario, cfg.eta, cfg.gamma_override)?;
    positive("--stride", cfg.stride)?;
    let Some(rule) = cfg.algorithm.inclusion_rule() else {
        return Err(Failure::Invalid(format!(
            "check needs an RRT# variant; {} keeps no queue to check",
            cfg.algorithm
        )));
    };
    let mut planner = RrtSharp::new(scenario, rule, params, SeededRng::new(cfg.seed));
    if cfg.inject_fault {
        let root = rrtsharp_core::nngraph::VertexId(0);
        let lmc = planner.graph().vertex(root).lmc();
        planner.perturb_g(root, lmc + 1.0);
    }
    let mut checkpoints = 0;
    for i in 0..=cfg.iterations {
        if i > 0 {
            planner.step()?;
        }
        if i % cfg.stride == 0 || i == cfg.iterations {
            checkpoints += 1;
            check_state(&planner, cfg.output_dir.as_deref())?;
        }
    }
    Ok(CheckSummary {
        checkpoints,
        vertices: planner.graph().len(),
        best_cost: planner.best_cost(),
    })
}

fn check_state(planner: &RrtSharp, out: Option<&Path>) -> Result<(), Failure> {
    let mut violations = bench::verify_consistency(planner).violations;
    violations.extend(bench::verify_against_dijkstra(planner));
    if violations.is_empty() {
        return Ok(());
    }
    let iteration = planner.iteration();
    let mut message = format!("{} invariant violation(s) at iteration {iteration}:", violations.len());
    for v in violations.iter().take(20) {
        write!(message, "\n  vertex {}: {:?}", v.vertex, v.kind).unwrap();
    }
    let dump = write_dump(&planner.snapshot());
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        let name = format!("violation_{iteration}.txt");
        write_file(dir, &name, &dump)?;
        write!(message, "\nsnapshot written to {}", dir.join(name).display()).unwrap();
    }
    Err(Failure::Invariant { message, dump })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(&RunConfig {
            scenario: a.shared.scenario,
            algorithm: a.algo,
            iterations: a.iters,
            seed: a.shared.seed,
            eta: a.shared.eta,
            gamma_override: a.shared.gamma,
            history_stride: a.shared.stride,
            output_dir: a.out,
            snapshot_at: a.snapshot,
        })
        .map(|s| {
            println!(
                "best cost {} over {} path vertices; {} vertices in graph",
                s.best_cost, s.path_length, s.vertices
            )
        }),
        Command::Compare(a) => cmd_compare(&CompareConfig {
            scenario: a.shared.scenario,
            variants: a.algo,
            iterations: a.iters,
            trials: a.trials,
            base_seed: a.shared.seed,
            eta: a.shared.eta,
            gamma_override: a.shared.gamma,
            history_stride: a.shared.stride,
            output_dir: a.out,
        })
        .map(|runs| {
            for (variant, r) in &runs {
                let last = r.stats.grid.last().expect("grid is never empty");
                println!(
                    "{variant}: mean final cost {} ({} of {} trials solved)",
                    last.mean_cost,
                    last.solved,
                    r.records.len()
                );
                for (t, e) in &r.failures {
                    eprintln!("{variant} trial {t} failed: {e}");
                }
            }
        }),
        Command::Check(a) => cmd_check(&CheckConfig {
            scenario: a.shared.scenario,
            algorithm: a.algo,
            iterations: a.iters,
            seed: a.shared.seed,
            eta: a.shared.eta,
            gamma_override: a.shared.gamma,
            stride: a.shared.stride,
            output_dir: a.out,
            inject_fault: a.inject_fault,
        })
        .map(|s| println!("ok: {} checkpoints, {} vertices, best cost {}", s.checkpoints, s.vertices, s.best_cost)),
    };
    match outcome {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {failure}");
            if let Failure::Invariant { dump, message } = &failure {
                if !message.contains("snapshot written to") {
                    eprint!("{dump}");
                }
            }
            failure.exit_code()
        }
    }
}
