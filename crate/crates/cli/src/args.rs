use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptssh::models::{build_hamiltonian, gamma_from_robin, HamiltonianSpec, ModelKind, RobinCoordinates};
use ptssh::ComplexMatrix;
use serde::Serialize;

use crate::UsageError;

#[derive(Parser, Debug)]
#[command(
    name = "ptssh",
    version,
    about = "Pseudometrics, spectra and pseudospectra of PT-symmetric chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the Hamiltonian as a JSON matrix.
    Build(BuildArgs),
    /// Emit closed-form and/or oracle pseudometrics with residual report.
    Pseudometrics(PseudometricsArgs),
    /// Eigenvalues along θ ∈ [0, 2π] as CSV.
    Sweep(SweepArgs),
    /// Real-spectrum classification over a (ρ, ω) grid as CSV.
    Epmap(EpmapArgs),
    /// Resolvent norms over a complex window as CSV.
    Pseudospectrum(PseudospectrumArgs),
    /// Positivity of ε-combinations of a pseudometric set as CSV.
    Positivity(PositivityArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ChainArgs {
    /// ssh, dssh or robin.
    #[arg(long, value_parser = parse_kind)]
    pub model: ModelKind,
    #[arg(long)]
    pub n: usize,
    /// Dimerization λ; defaults to 0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "theta")]
    pub lambda: Option<f64>,
    /// Converted to λ = cos θ.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

impl ChainArgs {
    pub fn lambda(&self) -> f64 {
        self.lambda.or(self.theta.map(f64::cos)).unwrap_or(0.0)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GammaArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta"])]
    pub rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta"])]
    pub omega: Option<f64>,
    /// Robin chart, requires --beta.
    #[arg(long, allow_hyphen_values = true, requires = "beta")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    pub beta: Option<f64>,
}

impl GammaArgs {
    pub fn gamma(&self) -> anyhow::Result<(f64, f64)> {
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => Ok(gamma_from_robin(RobinCoordinates::new(a, b)?)?),
            _ => Ok((self.rho.unwrap_or(0.0), self.omega.unwrap_or(0.0))),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub gamma: GammaArgs,
}

impl ModelArgs {
    pub fn spec(&self) -> anyhow::Result<HamiltonianSpec> {
        let (rho, omega) = self.gamma.gamma()?;
        let lambda = self.chain.lambda();
        if self.chain.model == ModelKind::Robin && lambda != 0.0 {
            return Err(UsageError("the robin model has lambda = 0; drop --lambda/--theta".into()).into());
        }
        Ok(HamiltonianSpec::new(
            self.chain.model,
            self.chain.n,
            lambda,
            rho,
            omega,
        )?)
    }

    pub fn hamiltonian(&self) -> anyhow::Result<(HamiltonianSpec, ComplexMatrix)> {
        let spec = self.spec()?;
        let h = build_hamiltonian(&spec)?;
        Ok((spec, h))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Closed,
    Oracle,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct PseudometricsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `all` or a comma-separated list of family indices.
    #[arg(long, default_value = "all")]
    pub k: String,
    #[arg(long, value_enum, default_value = "closed")]
    pub source: Source,
    /// Write matrices even when they fail the residual gate.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

impl PseudometricsArgs {
    pub fn indices(&self, n: usize) -> anyhow::Result<Option<Vec<usize>>> {
        if self.k.trim().eq_ignore_ascii_case("all") {
            return Ok(None);
        }
        let ks = self
            .k
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| UsageError(format!("--k expects 'all' or a list like 1,2,3, got '{}'", self.k)))?;
        if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k > n) {
            return Err(UsageError(format!("family index {bad} outside 1..={n}")).into());
        }
        Ok(Some(ks))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of θ samples on [0, 2π].
    #[arg(long, default_value_t = 200)]
    pub theta_steps: usize,
    /// Use the uniform -1+λ chain instead of the selected model.
    #[arg(long)]
    pub swapped: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct EpmapArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// `min:max:count`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub rho: Range,
    /// `min:max:count`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub omega: Range,
    #[command(flatten)]
    pub out: OutArgs,
    /// Boundary point list; defaults to `<out>.boundary.csv` when --out is set.
    #[arg(long)]
    pub boundary_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PseudospectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `re_min:re_max:im_min:im_max`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    pub window: WindowSpec,
    /// Grid points per axis.
    #[arg(long, default_value_t = 100)]
    pub res: usize,
    /// Add enclosure bounds using the unit-weight eigenvector metric.
    #[arg(long)]
    pub enclosure: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetChoice {
    Closed,
    Oracle,
}

#[derive(Args, Debug, Serialize)]
pub struct PositivityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "closed")]
    pub source: SetChoice,
    /// `min:max:count` applied to every coefficient.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-1:1:5")]
    pub eps: Range,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|e| e.to_string())
}

fn parse_floats(s: &str, expected: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != expected {
        return Err(format!("expected {expected} ':'-separated fields, got '{s}'"));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number")))
        .collect()
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let v = parse_floats(s, 3)?;
    let count = v[2];
    if count < 1.0 || count.fract() != 0.0 {
        return Err(format!("count must be a positive integer, got '{}'", v[2]));
    }
    if v.iter().any(|x| x.is_nan()) || v[0] > v[1] {
        return Err(format!("range needs min <= max, got '{s}'"));
    }
    Ok(Range {
        min: v[0],
        max: v[1],
        count: count as usize,
    })
}

pub fn parse_window(s: &str) -> Result<WindowSpec, String> {
    let v = parse_floats(s, 4)?;
    if v.iter().any(|x| x.is_nan()) || v[0] > v[1] || v[2] > v[3] {
        return Err(format!("window needs re_min <= re_max and im_min <= im_max, got '{s}'"));
    }
    Ok(WindowSpec {
        re_min: v[0],
        re_max: v[1],
        im_min: v[2],
        im_max: v[3],
    })
}
