//! `diffuse`: generate graphs, run adoption simulations and exploration
//! runs, evaluate analytic limit curves, and drive seeded experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime/domain error,
//! 3 acceptance-check failure in `experiment --check`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diffuse::analytic::{adoption_curve_analytic, ode_generalized, timing_curve, TimingModel};
use diffuse::curve::CurveMeta;
use diffuse::experiments::{checks, run_ensemble, EnsembleConfig};
use diffuse::explore::coupled_run_with;
use diffuse::graph::{
    complete_graph, cycle_graph, pair_configuration, read_edge_list, sample_simple_connected,
    write_edge_list, DegreeSpec, Graph, DEFAULT_MAX_TRIES,
};
use diffuse::io::{fmt_f64, write_atomic};
use diffuse::sim::{
    simulate_complete_exact, simulate_from, Clock, Init, ModelParams, Stop, Variant,
};

#[derive(Parser)]
#[command(name = "diffuse", version, about = "Adoption dynamics on random graphs")]
struct Cli {
    /// Cap on worker threads for replica parallelism (default: all cores).
    /// Results are independent of this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Run one adoption simulation and write the event trace.
    Simulate(SimulateArgs),
    /// Run the graph-free coupled exploration process.
    Explore(ExploreArgs),
    /// Evaluate analytic limit curves.
    Analytic(AnalyticArgs),
    /// Run a JSON-configured ensemble, or the named acceptance checks.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Graph family: complete | cycle | regular | distribution
    #[arg(long)]
    family: String,
    /// Node count (nodes are 0-indexed everywhere).
    #[arg(long)]
    n: usize,
    /// Degree for the regular family.
    #[arg(long)]
    k: Option<usize>,
    /// Degree distribution as `d:p,d:p`, e.g. `4:0.5,6:0.5`.
    #[arg(long)]
    degrees: Option<String>,
    /// Emit the raw configuration-model multigraph instead of
    /// rejection-sampling a simple connected graph.
    #[arg(long)]
    multigraph: bool,
    /// Rejection budget for simple connected sampling.
    #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
    max_tries: u64,
    /// Base seed (falls back to the DIFFUSE_SEED environment variable).
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (edge-list text format).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Graph family: complete | cycle | regular | distribution | file
    #[arg(long)]
    graph: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Degree distribution as `d:p,d:p`.
    #[arg(long)]
    degrees: Option<String>,
    /// Edge-list file for `--graph file`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Contact rate per node (events/time).
    #[arg(long)]
    beta: f64,
    /// Adoption success probability per contact.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Innovator rate (si-innovators) or removal rate (sir), per unit time.
    #[arg(long, default_value_t = 0.0)]
    beta_prime: f64,
    /// Process variant: si | si-innovators | sir
    #[arg(long, default_value = "si")]
    variant: String,
    /// Contact clock: node (each node rings at beta) | edge (each directed
    /// edge rings at beta divided by the mean degree).
    #[arg(long, default_value = "node")]
    clock: String,
    /// Engine: graph | complete-exact (jump chain; complete family only).
    #[arg(long, default_value = "graph")]
    engine: String,
    /// Stop rule: all | count:<x> | time:<t>
    #[arg(long, default_value = "all")]
    stop: String,
    /// Fix the initial adopter instead of drawing it uniformly.
    #[arg(long)]
    initial_node: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trace CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the adoption curve s(t) sampled on a uniform grid.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    /// Points in the curve grid.
    #[arg(long, default_value_t = 200)]
    curve_points: usize,
}

#[derive(Args)]
struct ExploreArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    /// Degree distribution as `d:p,d:p` (min degree 3 for coupled runs).
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long)]
    beta: f64,
    /// Innovator rate; > 0 switches to the innovators variant.
    #[arg(long, default_value_t = 0.0)]
    beta_prime: f64,
    #[arg(long, default_value = "node")]
    clock: String,
    #[arg(long, default_value = "all")]
    stop: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Write a per-iteration `j,N,A,t` CSV for fluid-limit analysis.
    #[arg(long)]
    dump_iterations: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Model: bass | genbass | meanfield | ode
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    k: Option<usize>,
    /// Degree distribution for the ode model.
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long, default_value = "node")]
    clock: String,
    /// Grid `start:stop:step`: adopter fractions s for the timing models,
    /// times t for the ode model.
    #[arg(long)]
    grid: String,
    /// Normalization anchor: the fraction placed at time 0.
    #[arg(long, default_value_t = 0.5)]
    anchor: f64,
    /// For timing models, emit s(t) samples instead of t(s).
    #[arg(long)]
    as_adoption_curve: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON ensemble config path.
    #[arg(long, conflicts_with = "check")]
    config: Option<PathBuf>,
    /// Run a named acceptance check (or `all`); uses pinned seeds and
    /// returns exit code 3 on failure.
    #[arg(long)]
    check: Option<String>,
    /// Output directory for summary JSON and curve CSVs.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Base-seed override for `--config` runs (checks always use their
    /// pinned seeds).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum RunError {
    Usage(String),
    Runtime(diffuse::Error),
}

impl From<diffuse::Error> for RunError {
    fn from(e: diffuse::Error) -> Self {
        RunError::Runtime(e)
    }
}

type RunResult = Result<u8, RunError>;

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

/// `--seed` flag, then the DIFFUSE_SEED environment variable; anything else
/// is a usage error (no silent entropy seeding, runs must be reproducible).
fn resolve_seed(flag: Option<u64>) -> Result<u64, RunError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("DIFFUSE_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| usage(format!("DIFFUSE_SEED=`{v}` is not a u64"))),
        Err(_) => Err(usage("no seed: pass --seed or set DIFFUSE_SEED")),
    }
}

fn parse_stop(text: &str) -> Result<Stop, RunError> {
    if text == "all" {
        return Ok(Stop::All);
    }
    if let Some(x) = text.strip_prefix("count:") {
        return x
            .parse()
            .map(Stop::Count)
            .map_err(|_| usage(format!("bad count in --stop {text}")));
    }
    if let Some(t) = text.strip_prefix("time:") {
        return t
            .parse()
            .map(Stop::Time)
            .map_err(|_| usage(format!("bad time in --stop {text}")));
    }
    Err(usage(format!(
        "--stop must be all, count:<x> or time:<t>, got `{text}`"
    )))
}

fn parse_variant(text: &str) -> Result<Variant, RunError> {
    match text {
        "si" => Ok(Variant::Si),
        "si-innovators" => Ok(Variant::SiInnovators),
        "sir" => Ok(Variant::Sir),
        other => Err(usage(format!("unknown variant `{other}`"))),
    }
}

fn parse_clock(text: &str) -> Result<Clock, RunError> {
    match text {
        "node" => Ok(Clock::Node),
        "edge" => Ok(Clock::Edge),
        other => Err(usage(format!("--clock must be node or edge, got `{other}`"))),
    }
}

fn parse_degrees(text: &str) -> Result<DegreeSpec, RunError> {
    let mut entries = Vec::new();
    for part in text.split(',') {
        let (d, p) = part
            .split_once(':')
            .ok_or_else(|| usage(format!("--degrees entries are d:p, got `{part}`")))?;
        let d: usize = d
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad degree `{d}`")))?;
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad probability `{p}`")))?;
        entries.push((d, p));
    }
    let spec = DegreeSpec::distribution(entries);
    spec.validate()?;
    Ok(spec)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, RunError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("--grid is start:stop:step, got `{text}`")));
    }
    let start: f64 = parts[0].parse().map_err(|_| usage("bad grid start"))?;
    let stop: f64 = parts[1].parse().map_err(|_| usage("bad grid stop"))?;
    let step: f64 = parts[2].parse().map_err(|_| usage("bad grid step"))?;
    if step <= 0.0 || stop < start {
        return Err(usage("grid needs stop >= start and step > 0"));
    }
    let count = ((stop - start) / step).round() as usize + 1;
    Ok((0..count)
        .map(|i| start + i as f64 * step)
        .filter(|&v| v <= stop + 1e-12)
        .collect())
}

fn spec_from_flags(
    family: &str,
    k: Option<usize>,
    degrees: Option<&String>,
) -> Result<DegreeSpec, RunError> {
    match family {
        "regular" => {
            let k = k.ok_or_else(|| usage("--family regular needs --k"))?;
            Ok(DegreeSpec::regular(k))
        }
        "distribution" => {
            let d = degrees.ok_or_else(|| usage("--family distribution needs --degrees"))?;
            parse_degrees(d)
        }
        other => Err(usage(format!("family `{other}` has no degree spec"))),
    }
}

fn run(command: Command) -> RunResult {
    match command {
        Command::Generate(args) => generate(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Explore(args) => explore_cmd(args),
        Command::Analytic(args) => analytic_cmd(args),
        Command::Experiment(args) => experiment_cmd(args),
    }
}

fn generate(args: GenerateArgs) -> RunResult {
    let graph = match args.family.as_str() {
        "complete" => complete_graph(args.n)?,
        "cycle" => cycle_graph(args.n)?,
        "regular" | "distribution" => {
            let spec = spec_from_flags(&args.family, args.k, args.degrees.as_ref())?;
            let seed = resolve_seed(args.seed)?;
            if args.multigraph {
                pair_configuration(&spec, args.n, seed)?
            } else {
                let out = sample_simple_connected(&spec, args.n, seed, args.max_tries)?;
                log::info!(
                    "accepted after {} non-simple and {} disconnected rejections",
                    out.rejected_non_simple,
                    out.rejected_disconnected
                );
                out.graph
            }
        }
        other => return Err(usage(format!("unknown family `{other}`"))),
    };
    write_edge_list(&graph, &args.out)?;
    println!(
        "wrote {} (n={}, edges={})",
        args.out.display(),
        graph.n(),
        graph.edge_count()
    );
    Ok(0)
}

fn simulate_cmd(args: SimulateArgs) -> RunResult {
    let params = ModelParams {
        beta: args.beta,
        p: args.p,
        beta_prime: args.beta_prime,
        variant: parse_variant(&args.variant)?,
        clock: parse_clock(&args.clock)?,
    };
    params.validate()?;
    let stop = parse_stop(&args.stop)?;
    let seed = resolve_seed(args.seed)?;
    let need_n = || args.n.ok_or_else(|| usage("this graph family needs --n"));

    let trace = if args.engine == "complete-exact" {
        if args.graph != "complete" {
            return Err(usage("--engine complete-exact needs --graph complete"));
        }
        if params.variant != Variant::Si {
            return Err(usage("--engine complete-exact supports the si variant only"));
        }
        simulate_complete_exact(need_n()?, params.beta * params.p, seed, stop)?
    } else if args.engine == "graph" {
        let graph: Graph = match args.graph.as_str() {
            "complete" => complete_graph(need_n()?)?,
            "cycle" => cycle_graph(need_n()?)?,
            "regular" | "distribution" => {
                let spec = spec_from_flags(&args.graph, args.k, args.degrees.as_ref())?;
                let graph_seed = diffuse::rng::derive_seed(seed, 0);
                sample_simple_connected(&spec, need_n()?, graph_seed, DEFAULT_MAX_TRIES)?.graph
            }
            "file" => {
                let path = args
                    .file
                    .as_ref()
                    .ok_or_else(|| usage("--graph file needs --file"))?;
                read_edge_list(path)?
            }
            other => return Err(usage(format!("unknown graph family `{other}`"))),
        };
        let sim_seed = if args.graph == "regular" || args.graph == "distribution" {
            diffuse::rng::derive_seed(seed, 1)
        } else {
            seed
        };
        let init = match args.initial_node {
            Some(v) => Init::Fixed(v),
            None => Init::UniformRandom,
        };
        simulate_from(&graph, &params, sim_seed, stop, init)?
    } else {
        return Err(usage(format!("unknown engine `{}`", args.engine)));
    };

    trace.write_csv(&args.out)?;
    println!(
        "wrote {} ({} adoptions, {} events)",
        args.out.display(),
        trace.adoptions(),
        trace.events().len()
    );
    if let Some(curve_path) = args.curve_out {
        if args.curve_points < 2 {
            return Err(usage("--curve-points must be >= 2"));
        }
        let t_end = trace
            .events()
            .last()
            .map(|e| e.time)
            .filter(|t| *t > 0.0)
            .unwrap_or(1.0);
        let grid: Vec<f64> = (0..args.curve_points)
            .map(|i| t_end * i as f64 / (args.curve_points - 1) as f64)
            .collect();
        let k_label = match (&args.k, &args.degrees) {
            (Some(k), _) => k.to_string(),
            (None, Some(d)) => d.clone(),
            _ => "-".into(),
        };
        let meta = CurveMeta::new("sim", &k_label, args.beta, None);
        let curve = trace.adoption_curve(&grid, meta)?;
        curve.write_csv(&curve_path)?;
        println!("wrote {}", curve_path.display());
    }
    Ok(0)
}

fn explore_cmd(args: ExploreArgs) -> RunResult {
    let spec = match (&args.k, &args.degrees) {
        (Some(k), None) => DegreeSpec::regular(*k),
        (None, Some(d)) => parse_degrees(d)?,
        _ => return Err(usage("explore needs exactly one of --k or --degrees")),
    };
    let params = ModelParams {
        beta: args.beta,
        p: 1.0,
        beta_prime: args.beta_prime,
        variant: if args.beta_prime > 0.0 {
            Variant::SiInnovators
        } else {
            Variant::Si
        },
        clock: parse_clock(&args.clock)?,
    };
    let stop = parse_stop(&args.stop)?;
    let seed = resolve_seed(args.seed)?;
    let run = coupled_run_with(
        args.n,
        &spec,
        &params,
        seed,
        stop,
        args.dump_iterations.is_some(),
    )?;
    run.trace.write_csv(&args.out)?;
    println!(
        "wrote {} ({} adoptions)",
        args.out.display(),
        run.trace.adoptions()
    );
    if let Some(path) = args.dump_iterations {
        let rows = run.iterations.expect("requested iteration log");
        write_atomic(&path, |w| {
            writeln!(w, "j,N,A,t")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    r.j,
                    r.sleeping_nodes,
                    r.active_clones,
                    fmt_f64(r.time)
                )?;
            }
            Ok(())
        })?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn analytic_cmd(args: AnalyticArgs) -> RunResult {
    let grid = parse_grid(&args.grid)?;
    let curve = match args.model.as_str() {
        "bass" | "genbass" | "meanfield" => {
            let model = match args.model.as_str() {
                "bass" => TimingModel::Bass,
                "genbass" => TimingModel::GenBass {
                    k: args.k.ok_or_else(|| usage("--model genbass needs --k"))?,
                },
                _ => TimingModel::MeanField {
                    k: args.k.ok_or_else(|| usage("--model meanfield needs --k"))?,
                },
            };
            if args.as_adoption_curve {
                adoption_curve_analytic(model, args.beta, &grid, args.anchor)?
            } else {
                timing_curve(model, args.beta, &grid, args.anchor)?
            }
        }
        "ode" => {
            let spec = match (&args.k, &args.degrees) {
                (Some(k), None) => DegreeSpec::regular(*k),
                (None, Some(d)) => parse_degrees(d)?,
                _ => return Err(usage("--model ode needs exactly one of --k or --degrees")),
            };
            ode_generalized(&spec, args.beta, parse_clock(&args.clock)?, args.anchor, &grid)?
        }
        other => return Err(usage(format!("unknown model `{other}`"))),
    };
    curve.write_csv(&args.out)?;
    println!("wrote {} ({} rows)", args.out.display(), curve.len());
    Ok(0)
}

fn experiment_cmd(args: ExperimentArgs) -> RunResult {
    if let Some(check_name) = args.check {
        if args.seed.is_some() {
            return Err(usage(
                "--check runs use pinned seeds; --seed is not accepted in check mode",
            ));
        }
        let names: Vec<&str> = if check_name == "all" {
            checks::CHECK_NAMES.to_vec()
        } else {
            let name = checks::CHECK_NAMES
                .iter()
                .find(|n| **n == check_name)
                .ok_or_else(|| {
                    usage(format!(
                        "unknown check `{check_name}`; known: all, {}",
                        checks::CHECK_NAMES.join(", ")
                    ))
                })?;
            vec![*name]
        };
        let mut all_passed = true;
        for name in names {
            let report = checks::run_check(name)?;
            println!("== {}", report.title);
            for line in &report.lines {
                let mark = if line.passed { "PASS" } else { "FAIL" };
                if line.detail.is_empty() {
                    println!("[{mark}] {}", line.label);
                } else {
                    println!("[{mark}] {}: {}", line.label, line.detail);
                }
            }
            all_passed &= report.passed();
        }
        return Ok(if all_passed { 0 } else { 3 });
    }

    let config_path = args
        .config
        .ok_or_else(|| usage("experiment needs --config <file> or --check <name>"))?;
    let text = std::fs::read_to_string(&config_path).map_err(diffuse::Error::from)?;
    let mut cfg = EnsembleConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let summary = run_ensemble(&cfg)?;
    std::fs::create_dir_all(&args.out_dir).map_err(diffuse::Error::from)?;
    let json_path = args.out_dir.join(format!("{}-summary.json", cfg.name));
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_atomic(&json_path, |w| {
        w.write_all(json.as_bytes())?;
        writeln!(w)
    })?;
    println!("wrote {}", json_path.display());
    if let Some(curve) = summary.mean_curve() {
        let curve_path = args.out_dir.join(format!("{}-curve.csv", cfg.name));
        curve.write_csv(&curve_path)?;
        println!("wrote {}", curve_path.display());
    }
    for (r, msg) in &summary.failures {
        eprintln!("replica {r} failed: {msg}");
    }
    Ok(0)
}
