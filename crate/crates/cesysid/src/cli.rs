//! Command-line surface: `simulate`, `identify`, `ce`, and `version`.
//!
//! Every setting can come from a flag or from a flat key=value config
//! file (`--config`); flags override file values. The seed falls back to
//! the `CESYSID_SEED` environment variable when neither provides one.
//! Exit codes: 0 success, 1 usage error, 2 data/validation error,
//! 3 numerical failure.

use crate::dynsys::{integrate_rk4, random_initial_state, SimConfig, SystemSpec};
use crate::error::{Error, Result};
use crate::identify::{identify, PermutationConfig, SourceInfo};
use crate::io::{
    parse_number, read_config_file, read_matrix_csv, read_trajectory_csv, report_to_csv,
    report_to_json, write_report, write_trajectory_csv, ReportFormat,
};
use crate::term_library::TermMode;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

pub const SEED_ENV_VAR: &str = "CESYSID_SEED";

#[derive(Parser)]
#[command(
    name = "cesysid",
    version,
    about = "Identify governing-equation terms of dynamical systems from trajectories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a built-in system and write the trajectory as CSV
    Simulate(SimulateArgs),
    /// Rank candidate terms for each state derivative of a trajectory
    Identify(IdentifyArgs),
    /// Estimate copula entropy / mutual information of a CSV matrix
    Ce(CeArgs),
    /// Print the version
    Version,
}

fn number_arg(text: &str) -> std::result::Result<f64, String> {
    parse_number(text).map_err(|e| e.to_string())
}

#[derive(Args, Clone, Default)]
struct SimFlags {
    /// Built-in system name (currently: lorenz)
    #[arg(long)]
    system: Option<String>,
    /// Lorenz sigma; decimals and fractions like 8/3 are accepted
    #[arg(long, value_parser = number_arg)]
    sigma: Option<f64>,
    /// Lorenz rho
    #[arg(long, value_parser = number_arg)]
    rho: Option<f64>,
    /// Lorenz beta
    #[arg(long, value_parser = number_arg)]
    beta: Option<f64>,
    /// Recorded time span (default 30)
    #[arg(long, value_parser = number_arg)]
    horizon: Option<f64>,
    /// Samples per unit time (default 100)
    #[arg(long)]
    rate: Option<u32>,
    /// Start time (default 0)
    #[arg(long, value_parser = number_arg)]
    t0: Option<f64>,
    /// Time integrated and discarded before recording (default 0)
    #[arg(long = "burn-in", value_parser = number_arg)]
    burn_in: Option<f64>,
    /// Comma-separated initial state; drawn at random when omitted
    #[arg(long)]
    x0: Option<String>,
    /// Lower bound of the random initial-state range (default -10)
    #[arg(long = "x0-low", value_parser = number_arg)]
    x0_low: Option<f64>,
    /// Upper bound of the random initial-state range (default 10)
    #[arg(long = "x0-high", value_parser = number_arg)]
    x0_high: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    sim: SimFlags,
    /// Seed for the random initial state
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Flat key=value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct IdentifyArgs {
    /// Trajectory CSV (header row, time first); conflicts with --system
    #[arg(short, long, conflicts_with = "system")]
    input: Option<PathBuf>,
    #[command(flatten)]
    sim: SimFlags,
    /// Candidate library: paper, degree:N, or comma-separated term names
    #[arg(long)]
    terms: Option<String>,
    /// Neighbor count for the entropy estimate (default 3)
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Enable permutation significance testing with this many shuffles
    #[arg(long)]
    permutations: Option<usize>,
    /// Significance level recorded with permutation tests (default 0.05)
    #[arg(long, value_parser = number_arg)]
    alpha: Option<f64>,
    /// Seed for the initial state and the permutation streams
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; the report goes to stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Report format: json or csv (default json)
    #[arg(long)]
    format: Option<String>,
    /// Flat key=value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CeArgs {
    /// Numeric CSV matrix (header row, every column a variable)
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Neighbor count for the entropy estimate (default 3)
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Flat key=value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Run the CLI and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Version => {
            println!("cesysid {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        Command::Simulate(args) => run_simulate(args),
        Command::Identify(args) => run_identify(args),
        Command::Ce(args) => run_ce(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Flag-over-file-over-default resolution for one subcommand.
struct Resolver {
    file: BTreeMap<String, String>,
}

impl Resolver {
    fn new(config: Option<&PathBuf>, allowed: &[&str]) -> Result<Self> {
        let file = match config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for key in file.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "unknown config key '{key}' (valid keys: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(Self { file })
    }

    fn resolve<T, F>(&self, key: &str, flag: Option<T>, parse: F) -> Result<Option<T>>
    where
        F: Fn(&str) -> Result<T>,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => parse(raw).map(Some).map_err(|e| {
                Error::Config(format!("config key '{key}': {e}"))
            }),
            None => Ok(None),
        }
    }

    fn number(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>> {
        self.resolve(key, flag, parse_number)
    }

    fn integer<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        self.resolve(key, flag, |s| {
            s.parse::<T>().map_err(|_| Error::Config(format!("not an integer: '{s}'")))
        })
    }

    fn string(&self, key: &str, flag: Option<String>) -> Result<Option<String>> {
        self.resolve(key, flag, |s| Ok(s.to_string()))
    }
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV_VAR) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV_VAR} is not an unsigned integer: '{text}'"))),
        Err(_) => Ok(None),
    }
}

struct ResolvedSim {
    spec: SystemSpec,
    config: SimConfig,
    echo: BTreeMap<String, String>,
}

const SIM_KEYS: &[&str] = &[
    "system", "sigma", "rho", "beta", "horizon", "rate", "t0", "burn-in", "x0", "x0-low",
    "x0-high",
];

fn resolve_sim(resolver: &Resolver, flags: &SimFlags, seed: u64) -> Result<ResolvedSim> {
    let system = resolver
        .string("system", flags.system.clone())?
        .unwrap_or_else(|| "lorenz".to_string());
    let mut overrides = BTreeMap::new();
    for (key, flag) in [("sigma", flags.sigma), ("rho", flags.rho), ("beta", flags.beta)] {
        if let Some(v) = resolver.number(key, flag)? {
            overrides.insert(key.to_string(), v);
        }
    }
    let spec = SystemSpec::by_name(&system, &overrides)?;

    let horizon = resolver.number("horizon", flags.horizon)?.unwrap_or(30.0);
    let rate = resolver.integer("rate", flags.rate)?.unwrap_or(100);
    let t0 = resolver.number("t0", flags.t0)?.unwrap_or(0.0);
    let burn_in = resolver.number("burn-in", flags.burn_in)?.unwrap_or(0.0);
    let x0_low = resolver.number("x0-low", flags.x0_low)?.unwrap_or(-10.0);
    let x0_high = resolver.number("x0-high", flags.x0_high)?.unwrap_or(10.0);

    let initial_state = match resolver.string("x0", flags.x0.clone())? {
        Some(text) => {
            let state: Vec<f64> =
                text.split(',').map(parse_number).collect::<Result<_>>().map_err(|e| {
                    Error::Config(format!("bad --x0 '{text}': {e}"))
                })?;
            if state.len() != spec.dim() {
                return Err(Error::Config(format!(
                    "--x0 has {} entries, system '{}' has dimension {}",
                    state.len(),
                    spec.name(),
                    spec.dim()
                )));
            }
            state
        }
        None => random_initial_state(seed, spec.dim(), x0_low, x0_high)?,
    };

    let mut echo = BTreeMap::new();
    echo.insert("system".into(), spec.name().to_string());
    for (name, value) in spec.params() {
        echo.insert(name.clone(), format!("{value}"));
    }
    echo.insert("horizon".into(), format!("{horizon}"));
    echo.insert("rate".into(), format!("{rate}"));
    echo.insert("t0".into(), format!("{t0}"));
    echo.insert("burn-in".into(), format!("{burn_in}"));
    echo.insert(
        "x0".into(),
        initial_state.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","),
    );
    echo.insert("seed".into(), format!("{seed}"));

    let config = SimConfig {
        initial_state,
        t0,
        horizon,
        sample_rate: rate,
        seed,
        burn_in,
    };
    Ok(ResolvedSim { spec, config, echo })
}

fn resolve_seed(resolver: &Resolver, flag: Option<u64>) -> Result<u64> {
    Ok(resolver
        .integer("seed", flag)?
        .or(seed_from_env()?)
        .unwrap_or(0))
}

/// Rebuild the canonical command line from the echo map. Values are
/// attached with `=` so that negative numbers replay cleanly.
fn reconstruct_command(subcommand: &str, echo: &BTreeMap<String, String>, order: &[&str]) -> String {
    let mut parts = vec!["cesysid".to_string(), subcommand.to_string()];
    for key in order {
        if let Some(value) = echo.get(*key) {
            if *key == "k" {
                parts.push(format!("-k {value}"));
            } else {
                parts.push(format!("--{key}={value}"));
            }
        }
    }
    parts.join(" ")
}

const IDENTIFY_ORDER: &[&str] = &[
    "input", "system", "sigma", "rho", "beta", "horizon", "rate", "t0", "burn-in", "x0", "seed",
    "terms", "k", "permutations", "alpha", "format", "output",
];

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let mut allowed = vec!["seed", "output"];
    allowed.extend_from_slice(SIM_KEYS);
    let resolver = Resolver::new(args.config.as_ref(), &allowed)?;

    let seed = resolve_seed(&resolver, args.seed)?;
    let resolved = resolve_sim(&resolver, &args.sim, seed)?;
    let output = resolver
        .string("output", args.output.map(|p| p.display().to_string()))?
        .ok_or_else(|| Error::Config("simulate needs an output path (-o)".into()))?;

    let traj = integrate_rk4(&resolved.spec, &resolved.config)?;
    write_trajectory_csv(&traj, &output)?;
    println!("wrote {} samples to {}", traj.n_samples(), output);
    Ok(())
}

fn run_identify(args: IdentifyArgs) -> Result<()> {
    let mut allowed = vec![
        "input", "terms", "k", "permutations", "alpha", "seed", "output", "format",
    ];
    allowed.extend_from_slice(SIM_KEYS);
    let resolver = Resolver::new(args.config.as_ref(), &allowed)?;

    let seed = resolve_seed(&resolver, args.seed)?;
    let input = resolver.string("input", args.input.map(|p| p.display().to_string()))?;
    let system_requested =
        args.sim.system.is_some() || resolver.string("system", None)?.is_some();

    let mut echo = BTreeMap::new();
    let (traj, source) = match (&input, system_requested) {
        (Some(path), false) => {
            echo.insert("input".into(), path.clone());
            (read_trajectory_csv(path)?, SourceInfo::Csv { path: path.clone() })
        }
        (None, true) => {
            let resolved = resolve_sim(&resolver, &args.sim, seed)?;
            echo.extend(resolved.echo.clone());
            let traj = integrate_rk4(&resolved.spec, &resolved.config)?;
            let source = SourceInfo::Simulated {
                system: resolved.spec.name().to_string(),
                params: resolved.spec.params().clone(),
                initial_state: resolved.config.initial_state.clone(),
                t0: resolved.config.t0,
                horizon: resolved.config.horizon,
                sample_rate: resolved.config.sample_rate,
                burn_in: resolved.config.burn_in,
                seed,
            };
            (traj, source)
        }
        (Some(_), true) => {
            return Err(Error::Config(
                "choose either --input or --system, not both".into(),
            ))
        }
        (None, false) => {
            return Err(Error::Config(
                "identify needs a trajectory: pass --input FILE or --system NAME".into(),
            ))
        }
    };

    let terms_text = resolver.string("terms", args.terms)?.unwrap_or_else(|| "paper".into());
    let mode = TermMode::parse(&terms_text)?;
    let k = resolver.integer("k", args.k)?.unwrap_or(3);
    let permutations = resolver.integer("permutations", args.permutations)?;
    let alpha = resolver.number("alpha", args.alpha)?.unwrap_or(0.05);
    let format_text = resolver.string("format", args.format)?.unwrap_or_else(|| "json".into());
    let format = ReportFormat::parse(&format_text)?;
    let output = resolver.string("output", args.output.map(|p| p.display().to_string()))?;

    let pcfg = permutations.map(|count| PermutationConfig { count, alpha, seed });

    let mut report = identify(&traj, &mode, k, pcfg.as_ref())?;

    echo.insert("terms".into(), mode.label());
    echo.insert("k".into(), format!("{k}"));
    if let Some(count) = permutations {
        echo.insert("permutations".into(), format!("{count}"));
        echo.insert("alpha".into(), format!("{alpha}"));
        echo.insert("seed".into(), format!("{seed}"));
    }
    echo.insert("format".into(), format_text.clone());
    if let Some(path) = &output {
        echo.insert("output".into(), path.clone());
    }
    report.metadata.source = source;
    report.metadata.command_line =
        Some(reconstruct_command("identify", &echo, IDENTIFY_ORDER));
    report.metadata.config_echo = echo;

    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    match &output {
        Some(path) => {
            write_report(&report, path, format)?;
            println!("wrote report to {path}");
        }
        None => {
            let rendered = match format {
                ReportFormat::Json => report_to_json(&report)?,
                ReportFormat::Csv => report_to_csv(&report)?,
            };
            print!("{rendered}");
        }
    }
    Ok(())
}

fn run_ce(args: CeArgs) -> Result<()> {
    let resolver = Resolver::new(args.config.as_ref(), &["input", "k"])?;
    let input = resolver
        .string("input", args.input.map(|p| p.display().to_string()))?
        .ok_or_else(|| Error::Config("ce needs an input matrix (-i)".into()))?;
    let k = resolver.integer("k", args.k)?.unwrap_or(3);

    let (names, data) = read_matrix_csv(&input)?;
    let est = crate::copula_entropy::copula_entropy(&data, k)?;
    println!("columns: {}", names.join(","));
    println!("n_samples: {}", est.n_samples);
    println!("dims: {}", est.dims);
    println!("k: {}", est.k);
    println!("ce_nats: {}", est.ce_nats);
    println!("mi_nats: {}", est.mi_nats);
    Ok(())
}
