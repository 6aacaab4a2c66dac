//! Hamiltonian families and parameter charts.
//!
//! Hopping amplitudes are `-1 ∓ λ` with `λ = cos θ`; the hopping scale and
//! dimerization strength are fixed to one. The boundary coupling is stored as
//! `γ = ρ + iω` and enters as `γ` on site 1 and `γ*` on site n.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square complex matrix carrying every operator in the crate.
pub type ComplexMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Alternating symmetric hoppings `-1-λ, -1+λ, -1-λ, ...`.
    Ssh,
    /// Superdiagonal `-1-λ`, subdiagonal `-1+λ`.
    Dssh,
    /// The SSH chain at `λ = 0`.
    Robin,
}

impl ModelKind {
    pub fn requires_even_dimension(self) -> bool {
        matches!(self, ModelKind::Ssh | ModelKind::Dssh)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Ssh => "ssh",
            ModelKind::Dssh => "dssh",
            ModelKind::Robin => "robin",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ssh" => Ok(ModelKind::Ssh),
            "dssh" => Ok(ModelKind::Dssh),
            "robin" => Ok(ModelKind::Robin),
            other => Err(Error::InvalidParameter(format!("unknown model kind '{other}'"))),
        }
    }
}

/// One member of a model family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub kind: ModelKind,
    pub n: usize,
    pub lambda: f64,
    pub rho: f64,
    pub omega: f64,
}

impl HamiltonianSpec {
    pub fn new(kind: ModelKind, n: usize, lambda: f64, rho: f64, omega: f64) -> Result<Self> {
        let spec = Self {
            kind,
            n,
            lambda,
            rho,
            omega,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ssh(n: usize, lambda: f64, rho: f64, omega: f64) -> Result<Self> {
        Self::new(ModelKind::Ssh, n, lambda, rho, omega)
    }

    pub fn dssh(n: usize, lambda: f64, rho: f64, omega: f64) -> Result<Self> {
        Self::new(ModelKind::Dssh, n, lambda, rho, omega)
    }

    pub fn robin(n: usize, rho: f64, omega: f64) -> Result<Self> {
        Self::new(ModelKind::Robin, n, 0.0, rho, omega)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidDimension {
                n: self.n,
                reason: "dimension must be at least 2",
            });
        }
        if self.kind.requires_even_dimension() && !self.n.is_multiple_of(2) {
            return Err(Error::InvalidDimension {
                n: self.n,
                reason: "SSH and dSSH chains need an even number of sites",
            });
        }
        if !(self.lambda.is_finite() && self.rho.is_finite() && self.omega.is_finite()) {
            return Err(Error::InvalidParameter("non-finite model parameter".into()));
        }
        if self.kind == ModelKind::Robin && self.lambda != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "the Robin chain has lambda = 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    pub fn gamma(&self) -> Complex64 {
        Complex64::new(self.rho, self.omega)
    }

    /// Same family member with `γ → γ*`: for SSH and Robin this is `H†`.
    pub fn conjugate_coupling(&self) -> Self {
        Self {
            omega: -self.omega,
            ..*self
        }
    }
}

/// The `(α, β)` chart of the discrete Robin coupling, `γ = 1/(1 − α − iβ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobinCoordinates {
    pub alpha: f64,
    pub beta: f64,
}

impl RobinCoordinates {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 1.0 && beta == 0.0 {
            return Err(Error::RobinPole);
        }
        Ok(Self { alpha, beta })
    }
}

/// `(ρ, ω)` for the Robin chart point `(α, β)`.
pub fn gamma_from_robin(coords: RobinCoordinates) -> Result<(f64, f64)> {
    let a = 1.0 - coords.alpha;
    let b = coords.beta;
    let denom = a * a + b * b;
    if denom == 0.0 {
        return Err(Error::RobinPole);
    }
    Ok((a / denom, b / denom))
}

/// Inverse chart: `α = 1 − ρ/|γ|²`, `β = ω/|γ|²`. Undefined at `γ = 0`.
pub fn robin_from_gamma(rho: f64, omega: f64) -> Result<RobinCoordinates> {
    let m = rho * rho + omega * omega;
    if m == 0.0 {
        return Err(Error::InvalidParameter(
            "gamma = 0 has no image in the Robin chart".into(),
        ));
    }
    Ok(RobinCoordinates {
        alpha: 1.0 - rho / m,
        beta: omega / m,
    })
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n;
    let strong = Complex64::new(-1.0 - spec.lambda, 0.0);
    let weak = Complex64::new(-1.0 + spec.lambda, 0.0);
    let mut h = ComplexMatrix::zeros(n, n);
    h[(0, 0)] = spec.gamma();
    h[(n - 1, n - 1)] = spec.gamma().conj();
    for i in 0..n - 1 {
        match spec.kind {
            ModelKind::Ssh | ModelKind::Robin => {
                let t = if i % 2 == 0 { strong } else { weak };
                h[(i, i + 1)] = t;
                h[(i + 1, i)] = t;
            }
            ModelKind::Dssh => {
                h[(i, i + 1)] = strong;
                h[(i + 1, i)] = weak;
            }
        }
    }
    Ok(h)
}

/// SSH chain with every `-1-λ` coupling replaced by `-1+λ` (a uniform chain).
pub fn build_swapped_coupling(n: usize, lambda: f64, rho: f64, omega: f64) -> Result<ComplexMatrix> {
    let spec = HamiltonianSpec::ssh(n, 0.0, rho, omega)?;
    let mut h = build_hamiltonian(&spec)?;
    let t = Complex64::new(-1.0 + lambda, 0.0);
    for i in 0..n - 1 {
        h[(i, i + 1)] = t;
        h[(i + 1, i)] = t;
    }
    Ok(h)
}

/// Exchange matrix `J`, `J_{i, n+1-i} = 1`.
pub fn pt_parity(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i + j + 1 == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
