//! Command-line arguments, the TOML run configuration and their merge.
//!
//! Every option may come from a flag or from the configuration file; flags win.
//! The file has a `[problem]` table for the shared options and one table per
//! subcommand, and unknown keys are rejected.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};
use vibstring::ambarzumyan::Extremum;
use vibstring::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "vibstring",
    version,
    about = "Spectral computations for vibrating strings and Sturm-Liouville operators"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by all subcommands.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CommonArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// String density p on [0, 1] (`const:c`, `poly:c0,c1,..` or `pw: [a,b] poly:.. ; ..`).
    #[arg(long, global = true, value_name = "COEFF")]
    pub p: Option<String>,
    /// Sturm-Liouville potential q on [0, pi].
    #[arg(long, global = true, value_name = "COEFF")]
    pub q: Option<String>,
    /// Reference density for uniqueness checks.
    #[arg(long, global = true, value_name = "COEFF")]
    pub pref: Option<String>,
    /// Reference potential for uniqueness checks.
    #[arg(long, global = true, value_name = "COEFF")]
    pub qref: Option<String>,
    /// Left string angle in (0, pi]; accepts numbers or forms like `pi/2`, `3pi/4` [default: pi].
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub alpha: Option<f64>,
    /// Right string angle in [0, pi) [default: 0].
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub beta: Option<f64>,
    /// Left Sturm-Liouville angle in (0, pi] [default: pi].
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub gamma: Option<f64>,
    /// Right Sturm-Liouville angle in [0, pi) [default: 0].
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub delta: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Relative condition tolerance for `check`, eigenvalue tolerance otherwise.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First eigenvalues, or one eigenfunction with `--eigenfunction`.
    Spectrum(SpectrumArgs),
    /// Predicted sign class and computed first eigenvalue on an angle lattice.
    Signmap(SignmapArgs),
    /// Samples of the zero curve (same as `signmap --curve-only`).
    Curve(CurveArgs),
    /// Bounds on the first eigenvalue from the extrema of the coefficient.
    Bounds(BoundsArgs),
    /// First-eigenvalue uniqueness condition for one theorem.
    Check(CheckArgs),
    /// Liouville transformation of a smooth density.
    Liouville(LiouvilleArgs),
    /// Potential-homotopy identity for the first eigenvalue.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SpectrumArgs {
    /// Number of eigenvalues [default: 5].
    #[arg(long)]
    pub count: Option<usize>,
    /// Write the normalized eigenfunction of this index instead.
    #[arg(long, value_name = "N")]
    pub eigenfunction: Option<usize>,
    /// Eigenfunction grid points [default: 4097].
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SignmapArgs {
    /// Lattice nodes along alpha [default: 21].
    #[arg(long)]
    pub alpha_count: Option<usize>,
    /// Lattice nodes along beta [default: 21].
    #[arg(long)]
    pub beta_count: Option<usize>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub alpha_min: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub alpha_max: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub beta_min: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "de_angle")]
    pub beta_max: Option<f64>,
    /// Emit zero-curve samples only.
    #[arg(long)]
    #[serde(default)]
    pub curve_only: bool,
    /// Curve samples for `--curve-only` [default: 200].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CurveArgs {
    /// Number of curve samples [default: 200].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BoundsArgs {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum Theorem {
    /// Extremal density condition.
    #[value(name = "2.1")]
    #[serde(rename = "2.1")]
    T2_1,
    /// Weighted-mean density condition.
    #[value(name = "2.2")]
    #[serde(rename = "2.2")]
    T2_2,
    /// Both conditions for the n-th eigenvalue.
    #[value(name = "2.3")]
    #[serde(rename = "2.3")]
    T2_3,
    /// Mean potential condition.
    #[value(name = "1.2")]
    #[serde(rename = "1.2")]
    T1_2,
    /// Extremal potential condition.
    #[value(name = "1.3")]
    #[serde(rename = "1.3")]
    T1_3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    #[value(alias = "sup")]
    #[serde(alias = "sup")]
    Max,
    #[value(alias = "inf")]
    #[serde(alias = "inf")]
    Min,
}

impl From<Which> for Extremum {
    fn from(w: Which) -> Self {
        match w {
            Which::Max => Extremum::Max,
            Which::Min => Extremum::Min,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub theorem: Option<Theorem>,
    /// Extremum for the extremal conditions [default: max].
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    /// Eigenvalue index for `--theorem 2.3` [default: 1].
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid points for eigenfunctions and inner products [default: 4097].
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LiouvilleArgs {
    /// Uniform x samples [default: 2049].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Compare eigenvalues n = 0..=N of both forms instead of emitting the image.
    #[arg(long, value_name = "N")]
    pub consistency: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TraceArgs {
    /// Gauss-Legendre nodes in the homotopy parameter [default: 32].
    #[arg(long)]
    pub t_nodes: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    problem: CommonArgs,
    #[serde(default)]
    spectrum: SpectrumArgs,
    #[serde(default)]
    signmap: SignmapArgs,
    #[serde(default)]
    curve: CurveArgs,
    #[serde(default)]
    bounds: BoundsArgs,
    #[serde(default)]
    check: CheckArgs,
    #[serde(default)]
    liouville: LiouvilleArgs,
    #[serde(default)]
    trace: TraceArgs,
}

/// Fills every unset option from `fallback`.
trait Merge {
    fn merge(self, fallback: Self) -> Self;
}

macro_rules! merge_fields {
    ($ty:ty { $($field:ident),* } $(bool { $($flag:ident),* })?) => {
        impl Merge for $ty {
            #[allow(unused_variables)]
            fn merge(self, fallback: Self) -> Self {
                Self {
                    $($field: self.$field.or(fallback.$field),)*
                    $($($flag: self.$flag || fallback.$flag,)*)?
                }
            }
        }
    };
}

merge_fields!(CommonArgs { config, p, q, pref, qref, alpha, beta, gamma, delta, out, format, jobs, tol });
merge_fields!(SpectrumArgs { count, eigenfunction, grid });
merge_fields!(SignmapArgs { alpha_count, beta_count, alpha_min, alpha_max, beta_min, beta_max, samples } bool { curve_only });
merge_fields!(CurveArgs { samples });
merge_fields!(BoundsArgs {});
merge_fields!(CheckArgs { theorem, which, n, grid });
merge_fields!(LiouvilleArgs { grid, consistency });
merge_fields!(TraceArgs { t_nodes });

fn load(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))
}

/// Applies the configuration file named by `--config`, if any, under the flags.
pub fn resolve(cli: Cli) -> Result<(CommonArgs, Command)> {
    let Some(path) = cli.common.config.clone() else {
        return Ok((cli.common, cli.command));
    };
    let file = load(&path)?;
    let common = cli.common.merge(file.problem);
    let command = match cli.command {
        Command::Spectrum(a) => Command::Spectrum(a.merge(file.spectrum)),
        Command::Signmap(a) => Command::Signmap(a.merge(file.signmap)),
        Command::Curve(a) => Command::Curve(a.merge(file.curve)),
        Command::Bounds(a) => Command::Bounds(a.merge(file.bounds)),
        Command::Check(a) => Command::Check(a.merge(file.check)),
        Command::Liouville(a) => Command::Liouville(a.merge(file.liouville)),
        Command::Trace(a) => Command::Trace(a.merge(file.trace)),
    };
    Ok((common, command))
}

/// Parses a plain number or a multiple of pi such as `pi`, `-pi/4`, `3pi/4`, `2*pi/3`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("`{text}` is not an angle (expected a number or a form like 3pi/4)");
    let idx = s.find("pi").ok_or_else(bad)?;
    let (head, tail) = (&s[..idx], &s[idx + 2..]);
    let coef = match head.strip_suffix('*').unwrap_or(head) {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(coef * PI / den)
}

fn de_angle<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(v)) => Ok(Some(v)),
        Some(Raw::Text(t)) => parse_angle(&t).map(Some).map_err(serde::de::Error::custom),
    }
}
