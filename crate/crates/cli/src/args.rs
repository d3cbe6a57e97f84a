use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gchtw_core::EquationId;

#[derive(Debug, Parser)]
#[command(name = "gchtw", version, about = "Traveling waves of generalized Camassa-Holm equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regular and singular equilibria with their kinds and eigenvalues.
    Equilibria(EquilibriaArgs),
    /// Trajectories of the regularized system inside a window.
    Portrait(PortraitArgs),
    /// Singular traveling-wave verdict (peakon, cuspon or none).
    Classify(ClassifyArgs),
    /// Exponential-series homoclinic solution at a saddle.
    Series(SeriesArgs),
    /// Traveling profiles u(x, t) of a stored solution.
    Wave(WaveArgs),
    /// Critical forcing g* for GCH-III and the hyperbola intersections.
    Gstar(GstarArgs),
    /// Oracle checks on a stored solution.
    Verify(VerifyArgs),
    /// Runs a job over a (c, g) grid, one manifest per cell.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// gch1, gch2 or gch3.
    #[arg(long, value_parser = parse_equation)]
    pub eq: EquationId,
    /// Wave speed (nonzero).
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
}

#[derive(Debug, Args)]
pub struct EquilibriaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Write to a file (with manifest) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// phi_min:phi_max:y_min:y_max
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: [f64; 4],
    #[arg(long, default_value_t = 64)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Regularized-time span integrated forward and backward from each seed.
    #[arg(long, default_value_t = 200.0)]
    pub span: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Full portrait as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum X0 {
    Auto,
    Value(f64),
}

impl FromStr for X0 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(X0::Auto);
        }
        s.parse::<f64>().map(X0::Value).map_err(|e| format!("expected a number or 'auto': {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    Continuity,
    Mirror,
    Matched,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    /// Forcing as derived by direct substitution (oracle-checked).
    Standard,
    /// Negated forcing, the convention of the published GCH-III tables.
    Reversed,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub x0: X0,
    /// Truncation order.
    #[arg(long = "M", short = 'M', default_value_t = gchtw_core::series::DEFAULT_ORDER)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = StrategyKind::Continuity)]
    pub strategy: StrategyKind,
    /// Right leading coefficient (mirror, matched).
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    /// Continuity target phi(0).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub target: f64,
    /// Pick the continuity root nearest to this value.
    #[arg(long, allow_hyphen_values = true)]
    pub prefer: Option<f64>,
    #[arg(long, value_enum, default_value_t = SignArg::Standard)]
    pub sign: SignArg,
    /// Exact g = 0 family (1, 2 or 3).
    #[arg(long)]
    pub family: Option<u8>,
    /// The two constants of the exact family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub constants: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[arg(long)]
    pub solution: PathBuf,
    /// xmin:xmax:step
    #[arg(long, value_parser = parse_step_range, allow_hyphen_values = true)]
    pub x: (f64, f64, f64),
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub t: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GstarArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Forcing level for the hyperbola intersections (default g*).
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JobKind {
    Equilibria,
    Classify,
    Series,
}

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Equilibria => "equilibria",
            JobKind::Classify => "classify",
            JobKind::Series => "series",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_equation)]
    pub eq: EquationId,
    /// a:b:n, n grid points including both ends.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub c_range: (f64, f64, usize),
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub g_range: (f64, f64, usize),
    #[arg(long, value_enum)]
    pub job: JobKind,
    /// Directory receiving one output and one manifest per cell.
    #[arg(long, default_value = "sweep")]
    pub out_dir: PathBuf,
    /// Extra arguments passed to every cell's job, after `--`.
    #[arg(last = true, allow_hyphen_values = true)]
    pub job_args: Vec<String>,
}

fn parse_equation(s: &str) -> Result<EquationId, String> {
    s.parse::<EquationId>().map_err(|e| e.to_string())
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != n {
        return Err(format!("expected {n} ':'-separated values, got {}", parts.len()));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect()
}

pub fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    if !(v[1] > v[0] && v[3] > v[2]) {
        return Err(format!("window '{s}' has zero or negative extent"));
    }
    Ok([v[0], v[1], v[2], v[3]])
}

pub fn parse_step_range(s: &str) -> Result<(f64, f64, f64), String> {
    let v = parse_floats(s, 3)?;
    if !(v[2] > 0.0) || !(v[1] >= v[0]) {
        return Err(format!("range '{s}' needs xmin <= xmax and a positive step"));
    }
    Ok((v[0], v[1], v[2]))
}

pub fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected a:b:n, got '{s}'"));
    }
    let a = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let b = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    let n = parts[2].parse::<usize>().map_err(|e| e.to_string())?;
    if n == 0 {
        return Err("grid needs at least one point".into());
    }
    Ok((a, b, n))
}

/// `n` points from `a` to `b` inclusive.
pub fn grid_points((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `xmin, xmin + step, ...` up to `xmax` (within a rounding slack).
pub fn step_points((lo, hi, step): (f64, f64, f64)) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}
