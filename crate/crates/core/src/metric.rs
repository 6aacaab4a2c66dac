//! Metrics `Θ = Σ ε_k P⁽ᵏ⁾`, their factors `Θ = Ω†Ω` and the hermitized `ΩHΩ⁻¹`.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dieudonne::PseudometricSet;
use crate::error::{Error, Result};
use crate::models::ComplexMatrix;
use crate::numerics::{self, check_square, frobenius};

#[derive(Debug, Clone)]
pub struct MetricCandidate {
    pub theta: ComplexMatrix,
    pub epsilons: Vec<f64>,
    pub positive: bool,
    pub min_eigenvalue: f64,
    /// `‖Ω‖₂‖Ω⁻¹‖₂`; infinite when `Θ` is not positive.
    pub kappa: f64,
    pub omega: Option<ComplexMatrix>,
    pub omega_inverse: Option<ComplexMatrix>,
}

impl MetricCandidate {
    /// Candidate for an explicitly given hermitian `Θ`.
    pub fn from_theta(theta: ComplexMatrix, epsilons: Vec<f64>) -> Result<Self> {
        check_square(&theta)?;
        let f = numerics::hermitian_factor(&theta)?;
        let min_eigenvalue = f.eigenvalues.first().copied().unwrap_or(0.0);
        let max_eigenvalue = f.eigenvalues.last().copied().unwrap_or(0.0);
        let kappa = if f.success {
            (max_eigenvalue / min_eigenvalue).sqrt()
        } else {
            f64::INFINITY
        };
        Ok(Self {
            theta,
            epsilons,
            positive: f.success,
            min_eigenvalue,
            kappa,
            omega: f.success.then_some(f.omega),
            omega_inverse: f.omega_inverse,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub epsilons: Vec<f64>,
    pub positive: bool,
    pub min_eigenvalue: f64,
}

fn combine(set: &PseudometricSet, epsilons: &[f64]) -> Result<ComplexMatrix> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("empty pseudometric set".into()));
    }
    if epsilons.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            got: epsilons.len(),
        });
    }
    let n = set.matrices[0].nrows();
    let mut theta = ComplexMatrix::zeros(n, n);
    for (p, &e) in set.matrices.iter().zip(epsilons) {
        theta += p * Complex64::new(e, 0.0);
    }
    Ok(theta)
}

pub fn assemble(set: &PseudometricSet, epsilons: &[f64]) -> Result<MetricCandidate> {
    let theta = combine(set, epsilons)?;
    MetricCandidate::from_theta(theta, epsilons.to_vec())
}

/// `‖h − h†‖_F / ‖h‖_F` for `h = ΩHΩ⁻¹`.
pub fn similarity_check(h: &ComplexMatrix, candidate: &MetricCandidate) -> Result<f64> {
    let (Some(omega), Some(inv)) = (&candidate.omega, &candidate.omega_inverse) else {
        return Err(Error::NotPositive);
    };
    let n = check_square(h)?;
    if omega.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: omega.nrows(),
            got: n,
        });
    }
    let small = omega * h * inv;
    let scale = frobenius(&small);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(frobenius(&(&small - small.adjoint())) / scale)
}

/// `⟨φ|Θ|ψ⟩`.
pub fn inner_product(
    candidate: &MetricCandidate,
    phi: &DVector<Complex64>,
    psi: &DVector<Complex64>,
) -> Result<Complex64> {
    if !candidate.positive {
        return Err(Error::NotPositive);
    }
    let n = candidate.theta.nrows();
    for v in [phi, psi] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    Ok((phi.adjoint() * &candidate.theta * psi)[(0, 0)])
}

const SCAN_LIMIT: usize = 10_000_000;

fn lattice(range: (f64, f64), samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![0.5 * (range.0 + range.1)];
    }
    let step = (range.1 - range.0) / (samples - 1) as f64;
    (0..samples).map(|s| range.0 + step * s as f64).collect()
}

/// Positivity verdicts on a `samples`-per-axis lattice over the coefficient
/// box, preceded by the base point `ε = e₁`. Points are ordered with the last
/// coefficient varying fastest.
pub fn positivity_scan(set: &PseudometricSet, ranges: &[(f64, f64)], samples: usize) -> Result<Vec<ScanPoint>> {
    if ranges.is_empty() || samples == 0 {
        return Err(Error::InvalidParameter(
            "positivity scan needs ranges and samples".into(),
        ));
    }
    if ranges.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            got: ranges.len(),
        });
    }
    if ranges.iter().any(|r| !r.0.is_finite() || !r.1.is_finite() || r.0 > r.1) {
        return Err(Error::InvalidParameter("scan ranges need finite min <= max".into()));
    }
    let total = samples
        .checked_pow(ranges.len() as u32)
        .filter(|&t| t <= SCAN_LIMIT)
        .ok_or_else(|| Error::InvalidParameter("positivity scan lattice too large".into()))?;
    let axes: Vec<Vec<f64>> = ranges.iter().map(|&r| lattice(r, samples)).collect();

    let mut base = vec![0.0; set.len()];
    base[0] = 1.0;
    let points: Vec<Vec<f64>> = std::iter::once(base)
        .chain((0..total).map(|mut idx| {
            let mut eps = vec![0.0; axes.len()];
            for a in (0..axes.len()).rev() {
                eps[a] = axes[a][idx % samples];
                idx /= samples;
            }
            eps
        }))
        .collect();

    points
        .into_par_iter()
        .map(|eps| {
            let c = assemble(set, &eps)?;
            Ok(ScanPoint {
                epsilons: eps,
                positive: c.positive,
                min_eigenvalue: c.min_eigenvalue,
            })
        })
        .collect()
}
