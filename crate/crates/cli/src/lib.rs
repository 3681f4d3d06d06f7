//! Command-line experiment runner for `permlab`.
//!
//! Every experiment is described by an [`ExperimentConfig`]: the subcommand
//! with its fully resolved parameters, the master seed and the output
//! directory. [`run`] executes a config, writes its tables atomically and
//! records the config in `manifest.json`, from which `permlab replay`
//! reproduces the same bytes.

mod commands;
mod output;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub use output::{ExperimentResult, Manifest};

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid or inconsistent configuration (exit code 2).
    Config(String),
    /// Error raised by the library or by output I/O (exit code 3).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<permlab::Error> for CliError {
    fn from(e: permlab::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "permlab", version, about = "Permutation-invariant limit theorem laboratory")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving every output file [default: .; for `replay`,
    /// the directory recorded in the manifest].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for Monte Carlo loops (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: TopCommand,
}

#[derive(Debug, Subcommand)]
enum TopCommand {
    #[command(flatten)]
    Experiment(Command),
    /// Re-run the experiment recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqKind {
    Hadamard,
    Erdos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Norm {
    #[value(name = "sqrtN_over_2")]
    #[serde(rename = "sqrtN_over_2")]
    SqrtNOver2,
    #[value(name = "sqrtN")]
    #[serde(rename = "sqrtN")]
    SqrtN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremName {
    Clt,
    TrimmedClt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    CdfOverlay,
    Trajectory,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSeqArgs {
    #[arg(long, value_enum)]
    pub kind: SeqKind,
    /// Ratio bound for `hadamard`.
    #[arg(long)]
    pub q: Option<f64>,
    /// Constant for `erdos`.
    #[arg(long)]
    pub c: Option<f64>,
    /// Exponent for `erdos`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub n1: u64,
    /// Number of terms.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long, default_value = "seq.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DioCountArgs {
    #[arg(long)]
    pub seq: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: i64,
    #[arg(long = "N-list", value_delimiter = ',', required = true)]
    #[serde(rename = "N_list")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value = "counts.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltArgs {
    #[arg(long)]
    pub seq: PathBuf,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: usize,
    /// identity | reverse | block:k | random:seed
    #[arg(long, default_value = "identity")]
    pub perm: String,
    /// Length of the permuted index range (default: the sequence length).
    #[arg(long)]
    pub perm_len: Option<usize>,
    #[arg(long, value_enum, default_value = "sqrtN_over_2")]
    pub norm: Norm,
    /// Cosine coefficients of a general summand `f`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cos: Option<Vec<f64>>,
    /// Sine coefficients of a general summand `f`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sin: Option<Vec<f64>>,
    /// Fractional bits of `x` (default: chosen from the largest frequency).
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long, default_value = "dist.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LilArgs {
    #[arg(long)]
    pub seq: PathBuf,
    #[arg(long = "Nmax")]
    #[serde(rename = "Nmax")]
    pub n_max: usize,
    /// Number of random points `x`.
    #[arg(long, default_value_t = 200)]
    pub xs: usize,
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long, default_value = "lil.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProhorovArgs {
    #[arg(long)]
    pub mu: PathBuf,
    #[arg(long)]
    pub nu: PathBuf,
    /// Also run the exhaustive subset oracle.
    #[arg(long, default_value_t = false)]
    pub oracle: bool,
    /// Emit a Strassen coupling at this level.
    #[arg(long)]
    pub coupling_eps: Option<f64>,
    #[arg(long, default_value = "prohorov.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkArgs {
    #[arg(long, value_enum)]
    pub theorem: TheoremName,
    #[arg(long)]
    pub mu: PathBuf,
    #[arg(long = "k-list", value_delimiter = ',', required = true)]
    pub k_list: Vec<usize>,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: usize,
    #[arg(long, default_value = "table.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeableArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub theorem: TheoremName,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated permutations (identity | reverse | block:k | random:seed).
    #[arg(long, value_delimiter = ',', required = true)]
    pub perms: Vec<String>,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    #[arg(long, default_value = "report.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongLawArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    /// Write every `every`-th point of the trajectory (the last point is always written).
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[arg(long, default_value = "strong.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotArgs {
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "cdf-overlay")]
    pub kind: PlotKind,
    /// Variance of the normal reference curve in `cdf-overlay`.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    #[arg(long, default_value = "plot.svg")]
    pub out: PathBuf,
}

/// One experiment with its parameters.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a Hadamard or Erdős-gap sequence.
    GenSeq(GenSeqArgs),
    /// Count solutions of a n_k + b n_l = c for several prefix lengths.
    DioCount(DioCountArgs),
    /// Sample the normalised lacunary sum at uniform points.
    #[command(alias = "permute-clt")]
    Clt(CltArgs),
    /// Running law-of-the-iterated-logarithm statistic.
    Lil(LilArgs),
    /// Prohorov, Wasserstein-2 and KS distances between two measures.
    Prohorov(ProhorovArgs),
    /// KS distance of f_k to its limit for several k.
    FrameworkCheck(FrameworkArgs),
    /// Permuted limit check on an exchangeable model.
    Exchangeable(ExchangeableArgs),
    /// Strong-law trajectory on one drawn sequence.
    StrongLaw(StrongLawArgs),
    /// Render a CSV table as SVG.
    Plot(PlotArgs),
}

/// Fully resolved experiment: unknown keys are rejected when read back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Command,
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn absolute(path: &Path) -> CliResult<PathBuf> {
    std::path::absolute(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl ExperimentConfig {
    /// Makes every input path absolute so the config can be replayed from
    /// any working directory.
    pub fn resolved(mut self) -> CliResult<Self> {
        self.out_dir = absolute(&self.out_dir)?;
        match &mut self.experiment {
            Command::GenSeq(_) => {}
            Command::DioCount(a) => a.seq = absolute(&a.seq)?,
            Command::Clt(a) => a.seq = absolute(&a.seq)?,
            Command::Lil(a) => a.seq = absolute(&a.seq)?,
            Command::Prohorov(a) => {
                a.mu = absolute(&a.mu)?;
                a.nu = absolute(&a.nu)?;
            }
            Command::FrameworkCheck(a) => a.mu = absolute(&a.mu)?,
            Command::Exchangeable(a) => a.model = absolute(&a.model)?,
            Command::StrongLaw(a) => a.model = absolute(&a.model)?,
            Command::Plot(a) => a.input = absolute(&a.input)?,
        }
        Ok(self)
    }

    pub fn from_manifest(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok(manifest.config)
    }
}

/// Executes `config` on a dedicated pool of `threads` workers (rayon's
/// default when `None`), writing all outputs and the manifest.
pub fn run(config: &ExperimentConfig, threads: Option<usize>) -> CliResult<ExperimentResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Runtime(format!("thread-pool: {e}")))?;
    let started = std::time::Instant::now();
    let outputs = pool.install(|| commands::execute(config))?;
    output::finish(config, outputs, started.elapsed().as_secs_f64())
}

/// Parses command-line `args` (including the program name) into the
/// experiment they describe and the requested thread count. `replay`
/// loads the config from its manifest.
pub fn config_from_args<I, T>(args: I) -> CliResult<(ExperimentConfig, Option<usize>)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    config_of(cli)
}

fn config_of(cli: Cli) -> CliResult<(ExperimentConfig, Option<usize>)> {
    let config = match cli.command {
        TopCommand::Experiment(experiment) => {
            let out_dir = cli.out_dir.unwrap_or_else(|| PathBuf::from("."));
            ExperimentConfig { experiment, seed: cli.seed, out_dir }.resolved()?
        }
        TopCommand::Replay(r) => {
            let mut c = ExperimentConfig::from_manifest(&r.manifest)?;
            if let Some(dir) = cli.out_dir {
                c.out_dir = absolute(&dir)?;
            }
            c
        }
    };
    Ok((config, cli.threads))
}

/// Parses `args` (including the program name), runs the experiment and
/// returns the process exit code. Errors are reported on one stderr line.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match config_of(cli).and_then(|(config, threads)| run(&config, threads)) {
        Ok(result) => {
            for path in &result.manifest.outputs {
                println!("{path}");
            }
            0
        }
        Err(e) => {
            eprintln!("permlab: {e}");
            e.exit_code()
        }
    }
}
