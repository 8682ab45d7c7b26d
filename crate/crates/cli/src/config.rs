use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fell_core::approx::ApproxError;
use fell_core::bundle::{BundleError, BundleSpec, FiniteFellBundle};
use fell_core::ck::{AdjacencyMatrix, CkAlgebra, CkError};
use fell_core::group::GroupError;
use fell_core::ideals::IdealError;
use thiserror::Error;

use crate::parse::ParseError;

pub const MAX_WORD_LEN: usize = 6;
pub const MAX_K: usize = 4;
pub const MAX_M: usize = 12;
pub const MAX_GROUP_ORDER: usize = 12;
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ck(#[from] CkError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Verification workbench for Fell bundles and Cuntz-Krieger algebras.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on
/// usage or I/O errors.
#[derive(Debug, Parser)]
#[command(name = "fell", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact identity sweeps on O_A.
    CkCheck(CkCheckArgs),
    /// Normal form and degree decomposition of an expression.
    CkFourier(CkFourierArgs),
    /// Convergence table for the CK approximation net.
    ApproxRun(ApproxRunArgs),
    /// Numeric suite on a bundle given as JSON.
    BundleVerify(BundleArgs),
    /// Induced-ideal analysis on a bundle given as JSON.
    IdealAnalyze(IdealArgs),
}

#[derive(Debug, Args)]
pub struct CkCheckArgs {
    /// Preset (allones2, allones3, fib2) or path to {"n":..,"a":[[..]]}.
    #[arg(long = "A")]
    pub matrix: String,
    /// Word length D: pairs with |t|+|r| <= 2D, single words up to D.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    /// Also evaluate every identity on the truncated path representation.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct CkFourierArgs {
    #[arg(long = "A")]
    pub matrix: String,
    /// Expression such as "s1 s2* + 1/2 e(g1 g2')".
    pub expression: String,
}

#[derive(Debug, Args)]
pub struct ApproxRunArgs {
    #[arg(long = "A")]
    pub matrix: String,
    /// Free-group word, e.g. "g1 g2'".
    #[arg(long)]
    pub t: String,
    /// Inclusive range "a..b" or a single value.
    #[arg(long)]
    pub m: String,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    pub bundle: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct IdealArgs {
    pub bundle: PathBuf,
    /// JSON file {"ideals": [{"name": .., "generators": [[matrix per group element], ..]}]}.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// Random complement vectors per ideal for the J3 test.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

pub fn cap(name: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        return Err(usage(format!("{name} = {value} exceeds the limit {max}")));
    }
    Ok(())
}

impl RunConfig {
    /// Checks the size limits that do not need any input files.
    pub fn validate(&self) -> Result<(), CliError> {
        match &self.command {
            Command::CkCheck(a) => {
                cap("--depth", a.depth, MAX_WORD_LEN)?;
                cap("--k-max", a.k_max, MAX_K)
            }
            Command::CkFourier(_) => Ok(()),
            Command::ApproxRun(a) => {
                let range = parse_m_range(&a.m)?;
                cap("m", *range.end(), MAX_M)
            }
            Command::BundleVerify(_) | Command::IdealAnalyze(_) => Ok(()),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// A preset name or a JSON file.
pub fn load_algebra(source: &str) -> Result<(String, CkAlgebra), CliError> {
    if let Some(alg) = CkAlgebra::preset(source) {
        return Ok((source.to_string(), alg));
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(usage(format!("{source:?} is neither a preset (allones2, allones3, fib2) nor a file")));
    }
    let a: AdjacencyMatrix = serde_json::from_str(&read_file(path)?)?;
    Ok((source.to_string(), CkAlgebra::new(a)))
}

/// Reads a bundle, checking the size limits. With `validate` the Fell
/// axioms must hold; otherwise violations are left for the caller to report.
pub fn load_bundle(path: &Path, validate: bool) -> Result<FiniteFellBundle, CliError> {
    let spec = BundleSpec::from_json(&read_file(path)?)?;
    cap("dim", spec.dim, MAX_DIM)?;
    let order = spec.group.build()?.order();
    cap("group order", order, MAX_GROUP_ORDER)?;
    Ok(if validate { spec.build()? } else { spec.build_unchecked()? })
}

/// `a..b` (inclusive), `a..=b`, or a single value; `m >= 1`.
pub fn parse_m_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || usage(format!("invalid m range {text:?}, expected a..b"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
