//! Command-line definition, `--config` merging and value parsers.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "roughharm", version, about = "Irregular harmonic functions on the ball: reproducible experiments")]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for the subcommand flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (default: stdout, or $ROUGHHARM_OUT_DIR/<subcommand>.<ext>).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions d_k and eigenvalues k(k+n-2) of the harmonic spaces.
    Dims(DimsArgs),
    /// Evaluate a series (or its Kelvin transform) at points.
    Eval(EvalArgs),
    /// Per-degree energies measured by sphere quadrature.
    Spectrum(SpectrumArgs),
    /// Dyadic-block Sobolev partial sums and convergence verdicts.
    Sobolev(SobolevArgs),
    /// Dirichlet energy of a disk series: closed form and quadrature.
    Energy(EnergyArgs),
    /// Empirical modulus of continuity of a lacunary cosine series.
    Holder(HolderArgs),
    /// Cosine coefficients and the windowed decay certificate.
    Fourier(FourierArgs),
    /// Values of the Weierstrass function with certified tails.
    Weierstrass(WeierstrassArgs),
    /// Sup-norms of random unit spherical harmonics.
    NeuheiselSample(NeuheiselArgs),
    /// Check all interface conditions of a transmission instance.
    TransmissionVerify(TransmissionArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dims(_) => "dims",
            Command::Eval(_) => "eval",
            Command::Spectrum(_) => "spectrum",
            Command::Sobolev(_) => "sobolev",
            Command::Energy(_) => "energy",
            Command::Holder(_) => "holder",
            Command::Fourier(_) => "fourier",
            Command::Weierstrass(_) => "weierstrass",
            Command::NeuheiselSample(_) => "neuheisel-sample",
            Command::TransmissionVerify(_) => "transmission-verify",
        }
    }
}

/// Series selection shared by several subcommands.
#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// notHs, notCbeta, anyn_holder or hadamard.
    #[arg(long)]
    pub variant: String,
    #[arg(long)]
    pub n: usize,
    /// Truncation degree, an integer or `2^j`.
    #[arg(long = "K", value_parser = parse_truncation, default_value = "2^10")]
    pub k_max: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long)]
    pub n: usize,
    /// Inclusive degree range `a..b`, or a single degree.
    #[arg(long, value_parser = parse_range, default_value = "0..8")]
    pub k: (usize, usize),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Points as comma-separated coordinates; repeat for several points.
    #[arg(long = "point", value_parser = parse_point, required = true, allow_hyphen_values = true)]
    pub points: Vec<Point>,
    /// Evaluate the Kelvin transform instead (points with |x| >= 1).
    #[arg(long)]
    pub kelvin: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Highest analysed degree (default: the truncation).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SobolevArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Comma-separated exponents in [0, 2].
    #[arg(long, value_delimiter = ',', required = true)]
    pub sigma: Vec<f64>,
    #[arg(long, default_value_t = 6)]
    pub min_blocks: usize,
    #[arg(long, default_value_t = 0.99)]
    pub min_r_squared: f64,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// hadamard, notCbeta or anyn_holder (all on the disk).
    #[arg(long, default_value = "hadamard")]
    pub variant: String,
    /// Number of retained terms (overrides --K).
    #[arg(long)]
    pub terms: Option<u32>,
    #[arg(long = "K", value_parser = parse_truncation)]
    pub k_max: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Skip the quadrature evaluation.
    #[arg(long)]
    pub formula_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lacunary {
    Weierstrass,
    Hardy,
}

/// A lacunary cosine series.
#[derive(Debug, Args)]
pub struct LacunaryArgs {
    #[arg(long, value_enum, default_value_t = Lacunary::Weierstrass)]
    pub function: Lacunary,
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 60)]
    pub terms: u32,
}

#[derive(Debug, Args)]
pub struct HolderArgs {
    #[command(flatten)]
    pub series: LacunaryArgs,
    /// Finest scale 2^-finest.
    #[arg(long, default_value_t = 16)]
    pub finest: i32,
    /// Coarsest scale 2^-coarsest.
    #[arg(long, default_value_t = 4)]
    pub coarsest: i32,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[command(flatten)]
    pub series: LacunaryArgs,
    /// Number of samples (power of two, `2^j` accepted).
    #[arg(long = "N", value_parser = parse_truncation, default_value = "2^18")]
    pub samples: u64,
    /// Highest reported frequency (default N/4).
    #[arg(long, value_parser = parse_truncation)]
    pub kmax: Option<u64>,
    /// Use the exact lacunary spectrum instead of sampling.
    #[arg(long)]
    pub exact: bool,
    /// Comma-separated decay exponents for the certificate.
    #[arg(long, value_delimiter = ',')]
    pub decay: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct WeierstrassArgs {
    #[command(flatten)]
    pub series: LacunaryArgs,
    /// Comma-separated arguments t (default: a uniform grid).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    /// Size of the default uniform grid on [0, 2 pi).
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct NeuheiselArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
}

#[derive(Debug, Args)]
pub struct TransmissionArgs {
    /// example, tilde or holder.
    #[arg(long)]
    pub variant: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "K", value_parser = parse_truncation, default_value = "2^10")]
    pub k_max: u64,
    #[arg(long, default_value_t = 5)]
    pub bumps: usize,
    /// Scale of the boundary data (default keeps sup |Phi| below 1).
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 256)]
    pub directions: usize,
    /// Where to write witnesses when a condition fails.
    #[arg(long, value_name = "PATH")]
    pub witnesses: Option<PathBuf>,
}

/// Truncation literal: a non-negative integer or `b^j`.
pub fn parse_truncation(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|e| format!("bad base in '{s}': {e}"))?;
        let exp: u32 = exp.trim().parse().map_err(|e| format!("bad exponent in '{s}': {e}"))?;
        return base.checked_pow(exp).ok_or_else(|| format!("'{s}' overflows 64 bits"));
    }
    s.parse().map_err(|e| format!("bad truncation '{s}': {e}"))
}

/// A point given as comma-separated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

pub fn parse_point(s: &str) -> Result<Point, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad coordinate '{p}': {e}")))
        .collect::<Result<_, _>>()
        .map(Point)
}

/// Inclusive range `a..b` (or `a..=b`), or a single integer.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad degree '{p}': {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range '{s}'"));
            }
            Ok((a, b))
        }
        None => {
            let k = parse(s)?;
            Ok((k, k))
        }
    }
}

/// Insert `--key value` pairs from a config file after the subcommand name,
/// skipping keys already given on the command line (which take precedence).
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or("--config needs a path")?,
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected 'key = value'", lineno + 1))?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        let given = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        let value = value.trim().trim_matches('"');
        match value {
            "true" => extra.push(flag),
            "false" => {}
            _ => {
                extra.push(flag);
                extra.push(value.to_string());
            }
        }
    }
    // The subcommand is the first argument naming one; config flags go after it.
    let sub = argv
        .iter()
        .enumerate()
        .skip(1)
        .find(|(i, a)| !a.starts_with('-') && !(argv[*i - 1].starts_with("--") && !argv[*i - 1].contains('=') && takes_value(&argv[*i - 1])))
        .map(|(i, _)| i)
        .ok_or("no subcommand given")?;
    let mut merged = argv[..=sub].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[sub + 1..]);
    Ok(merged)
}

/// Global flags that consume the next argument.
fn takes_value(flag: &str) -> bool {
    matches!(flag, "--config" | "--out" | "--format")
}
