//! Command-line front end.
//!
//! Every command records its resolved arguments and seed in `manifest.json`
//! inside the output directory; `mdsc replay <manifest>` re-runs it.

mod commands;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flcount::ObjectKind;
use crate::grade::GradeTarget;

pub use commands::execute;

#[derive(Debug, Parser)]
#[command(name = "mdsc", version, about = "Design and analysis of multi-dimensional spatially-coupled LDPC codes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice; generated and recorded when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Log verbosity (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// Where the code comes from.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CodeArgs {
    /// JSON code descriptor (parameters plus matrix file paths).
    #[arg(long, visible_alias = "params", conflicts_with = "catalog")]
    pub code: Option<PathBuf>,
    /// Published code: md1, md2, md6 or md7.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Partition, lifting and optional relocation matrix files.
    #[arg(long, num_args = 2..=3, value_names = ["K", "LIFT", "MR"])]
    pub triple: Option<Vec<PathBuf>>,
    /// Coupling length, needed when only `--triple` is given.
    #[arg(long)]
    pub coupling: Option<usize>,
    /// Restrict relocations to auxiliary indices below this depth.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    /// Parity-check matrix of the MD-SC code in alist form.
    Alist,
    /// Partition, lifting and relocation files plus a descriptor.
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Zero,
    /// The relocation matrix of the code itself.
    Code,
    /// Quantized distribution from `--grade` or the catalog.
    Quantize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    /// Cycle-4 and cycle-6 first, then cycle-8.
    Lexicographic,
    /// Concatenation weights.
    Concat,
    /// Every listed kind weighted one.
    Uniform,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GradeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value = "cycle6")]
    pub target: GradeTarget,
    /// Row targets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub pstar: Option<Vec<f64>>,
    /// Partition matrix file whose edge distribution gives the row targets.
    #[arg(long = "K", conflicts_with = "pstar")]
    pub k: Option<PathBuf>,
    /// Take row targets from the code's own partition matrix.
    #[arg(long, conflicts_with_all = ["pstar", "k"])]
    pub pstar_from_code: bool,
    #[arg(long, default_value_t = 0.35)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.02)]
    pub alpha: f64,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    /// Force the first cycle-8 family on or off.
    #[arg(long)]
    pub zero_w1: Option<bool>,
    /// Concatenation weights `w66,w68,w88`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub concat_weights: Option<Vec<f64>>,
    /// Also evaluate the exact 6-6 expectation over every pattern class.
    #[arg(long)]
    pub exact66: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BuildArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum, default_value = "alist")]
    pub export: ExportFormat,
    /// Export the uncoupled-copies SC matrix instead of the MD-SC matrix.
    #[arg(long)]
    pub sc: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Object kinds, comma separated (cycle4, cycle6, cycle8, cfg66, cfg68, cfg88).
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_kind)]
    pub kinds: Vec<ObjectKind>,
    /// Also count the underlying SC code.
    #[arg(long)]
    pub sc: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ListArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_kind)]
    pub kinds: Vec<ObjectKind>,
    /// Cache file; defaults to `objects.bin` in the output directory.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct McmcArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum, default_value = "lexicographic")]
    pub objective: ObjectiveKind,
    /// Targeted kinds; defaults follow the objective.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    pub kinds: Option<Vec<ObjectKind>>,
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub concat_weights: Option<Vec<f64>>,
    /// Object cache; enumerated and written when missing or stale.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "quantize")]
    pub init: InitKind,
    /// Grade result (`P.json`) used by `--init quantize`.
    #[arg(long)]
    pub grade: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub delta: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    #[arg(long)]
    pub beta_init: Option<f64>,
    #[arg(long)]
    pub l1: Option<u64>,
    #[arg(long)]
    pub linf: Option<u32>,
    #[arg(long, default_value_t = 0.35)]
    pub density_cap: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ForecastArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Cycle length, 6 or 8.
    #[arg(long, default_value_t = 6)]
    pub len: usize,
    /// Grade result or JSON matrix with the distribution; the catalog's when absent.
    #[arg(long = "P")]
    pub p: Option<PathBuf>,
    #[arg(long)]
    pub zero_w1: Option<bool>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CensusArgs {
    /// Configurations (cfg66, cfg68, cfg88 or 6-6, 6-8, 8-8).
    #[arg(long, value_delimiter = ',', default_value = "cfg66,cfg68,cfg88", value_parser = parse_kind)]
    pub config: Vec<ObjectKind>,
    #[arg(long, default_value_t = 4)]
    pub gamma_max: usize,
    /// Keep every entry-count stratum instead of the top three.
    #[arg(long)]
    pub all_strata: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FerArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Eb/N0 points in dB, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub snr: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub frames: u64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 25.0)]
    pub llr_clip: f64,
    #[arg(long)]
    pub no_early_stop: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Optimize the relocation distribution.
    Grade(GradeArgs),
    /// Export the parity-check matrix or the matrix files.
    Build(BuildArgs),
    /// Count cycles and concatenations.
    Count(CountArgs),
    /// Enumerate targeted objects into a cache.
    ListObjects(ListArgs),
    /// Optimize the relocation matrix.
    Mcmc(McmcArgs),
    /// Closed-form cycle-count forecast.
    Forecast(ForecastArgs),
    /// Regenerate the pattern census.
    Census(CensusArgs),
    /// Frame error rate sweep.
    Fer(FerArgs),
    /// Re-run a recorded manifest.
    #[serde(skip)]
    Replay { manifest: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Grade(_) => "grade",
            Command::Build(_) => "build",
            Command::Count(_) => "count",
            Command::ListObjects(_) => "list-objects",
            Command::Mcmc(_) => "mcmc",
            Command::Forecast(_) => "forecast",
            Command::Census(_) => "census",
            Command::Fer(_) => "fer",
            Command::Replay { .. } => "replay",
        }
    }
}

/// Accepts kind names and the `6-6` style spelling.
pub fn parse_kind(s: &str) -> std::result::Result<ObjectKind, String> {
    let t = s.trim();
    let name = match t {
        "6-6" => "cfg66",
        "6-8" => "cfg68",
        "8-8" => "cfg88",
        other => other,
    };
    name.parse().map_err(|e: Error| e.to_string())
}

/// Exact record of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub threads: Option<usize>,
    pub command: Command,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParams(_) | Error::Parse(_) | Error::Dimension { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let (command, seed, threads) = match cli.command {
        Command::Replay { manifest } => {
            let m = Manifest::load(&manifest)?;
            (m.command, m.seed, cli.global.threads.or(m.threads))
        }
        c => (c, cli.global.seed.unwrap_or_else(rand::random), cli.global.threads),
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    }
    fs::create_dir_all(&cli.global.out)?;
    let outputs = execute(&command, seed, &cli.global.out)?;
    let manifest = Manifest {
        tool: "mdsc".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        threads,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        command,
    };
    fs::write(cli.global.out.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}
