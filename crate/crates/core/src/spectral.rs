//! Parameter sweeps, exceptional-point boundaries and pseudospectra.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    build_hamiltonian, build_swapped_coupling, robin_from_gamma, ComplexMatrix, HamiltonianSpec, ModelKind,
    RobinCoordinates,
};
use crate::numerics::{self, check_square};
use crate::tolerances;

/// `max |Im λ| ≤ tol · max(1, spectral radius)`.
pub fn spectrum_is_real(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(is_real(&numerics::eigenvalues(h)?, tol))
}

fn is_real(eigenvalues: &[Complex64], tol: f64) -> bool {
    let radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let im = eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    im <= tol * radius.max(1.0)
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// `min:max:count` grid along one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, count: usize) -> Result<Self> {
        if count == 0 || !min.is_finite() || !max.is_finite() || min > max {
            return Err(Error::InvalidParameter(format!(
                "axis needs finite min <= max and count >= 1, got {min}:{max}:{count}"
            )));
        }
        Ok(Self {
            name: name.into(),
            min,
            max,
            count,
        })
    }

    pub fn value(&self, idx: usize) -> f64 {
        if self.count == 1 {
            return self.min;
        }
        self.min + (self.max - self.min) * idx as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub params: Vec<f64>,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub all_real: bool,
    pub condition_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axes: Vec<Axis>,
    /// Row-major over `axes`, last axis fastest.
    pub points: Vec<SpectralPoint>,
}

pub fn classify(h: &ComplexMatrix, params: Vec<f64>) -> Result<SpectralPoint> {
    let dec = numerics::eig(h)?;
    let mut eigenvalues = dec.eigenvalues;
    sort_spectrum(&mut eigenvalues);
    Ok(SpectralPoint {
        params,
        all_real: is_real(&eigenvalues, tolerances::SPECTRAL),
        eigenvalues,
        condition_estimate: dec.condition_estimate,
    })
}

/// Spectra of `build(θ)` along `theta`.
pub fn sweep_with<F>(theta: &Axis, build: F) -> Result<SweepGrid>
where
    F: Fn(f64) -> Result<ComplexMatrix> + Sync,
{
    let points = theta
        .values()
        .into_par_iter()
        .map(|t| classify(&build(t)?, vec![t]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        axes: vec![theta.clone()],
        points,
    })
}

/// Spectra over `θ` with `λ = cos θ`.
pub fn sweep_theta(kind: ModelKind, n: usize, rho: f64, omega: f64, theta: &Axis) -> Result<SweepGrid> {
    if kind == ModelKind::Robin {
        return Err(Error::InvalidParameter("the Robin chain has no lambda to sweep".into()));
    }
    HamiltonianSpec::new(kind, n, 0.0, rho, omega)?;
    sweep_with(theta, |t| {
        build_hamiltonian(&HamiltonianSpec::new(kind, n, t.cos(), rho, omega)?)
    })
}

/// Same sweep for the chain whose `−1−λ` bonds are replaced by `−1+λ`.
pub fn sweep_theta_swapped(n: usize, rho: f64, omega: f64, theta: &Axis) -> Result<SweepGrid> {
    build_swapped_coupling(n, 0.0, rho, omega)?;
    sweep_with(theta, |t| build_swapped_coupling(n, t.cos(), rho, omega))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpCell {
    pub rho: f64,
    pub omega: f64,
    pub all_real: bool,
    pub condition_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub rho: f64,
    pub omega: f64,
    /// Image in the Robin chart, absent at `γ = 0`.
    pub robin: Option<RobinCoordinates>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpMap {
    pub rho_axis: Axis,
    pub omega_axis: Axis,
    /// `ρ` outer, `ω` inner.
    pub cells: Vec<EpCell>,
    pub boundary: Vec<BoundaryPoint>,
}

impl EpMap {
    pub fn cell(&self, ir: usize, iw: usize) -> &EpCell {
        &self.cells[ir * self.omega_axis.count + iw]
    }

    pub fn real_fraction(&self) -> f64 {
        self.cells.iter().filter(|c| c.all_real).count() as f64 / self.cells.len() as f64
    }

    /// Real-spectrum cells whose eight neighbours are real as well.
    pub fn interior_points(&self) -> Vec<(f64, f64)> {
        let (nr, nw) = (self.rho_axis.count, self.omega_axis.count);
        let mut out = Vec::new();
        for ir in 1..nr.saturating_sub(1) {
            for iw in 1..nw.saturating_sub(1) {
                let all = (ir - 1..=ir + 1).all(|a| (iw - 1..=iw + 1).all(|b| self.cell(a, b).all_real));
                if all {
                    let c = self.cell(ir, iw);
                    out.push((c.rho, c.omega));
                }
            }
        }
        out
    }
}

/// Bisects `[lo, hi]` for the point where `real_at` changes value.
pub fn bisect_transition<F>(mut lo: f64, mut hi: f64, tol: f64, real_at: F) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let at_lo = real_at(lo)?;
    if at_lo == real_at(hi)? {
        return Err(Error::BracketFailure(format!(
            "classification does not change on [{lo}, {hi}]"
        )));
    }
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if real_at(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn real_at(kind: ModelKind, n: usize, lambda: f64, rho: f64, omega: f64) -> Result<bool> {
    spectrum_is_real(
        &build_hamiltonian(&HamiltonianSpec::new(kind, n, lambda, rho, omega)?)?,
        tolerances::SPECTRAL,
    )
}

/// Classifies the `(ρ, ω)` grid by spectral reality and refines every edge
/// whose endpoints disagree to `EP_BISECTION`.
pub fn ep_boundary(kind: ModelKind, n: usize, lambda: f64, rho_axis: &Axis, omega_axis: &Axis) -> Result<EpMap> {
    HamiltonianSpec::new(kind, n, lambda, 0.0, 0.0)?;
    let grid: Vec<(f64, f64)> = rho_axis
        .values()
        .into_iter()
        .flat_map(|r| omega_axis.values().into_iter().map(move |w| (r, w)))
        .collect();
    let cells = grid
        .into_par_iter()
        .map(|(rho, omega)| {
            let h = build_hamiltonian(&HamiltonianSpec::new(kind, n, lambda, rho, omega)?)?;
            let p = classify(&h, vec![rho, omega])?;
            Ok(EpCell {
                rho,
                omega,
                all_real: p.all_real,
                condition_estimate: p.condition_estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (nr, nw) = (rho_axis.count, omega_axis.count);
    let mut edges = Vec::new();
    for ir in 0..nr {
        for iw in 0..nw {
            let here = &cells[ir * nw + iw];
            if iw + 1 < nw && cells[ir * nw + iw + 1].all_real != here.all_real {
                edges.push((ir * nw + iw, ir * nw + iw + 1));
            }
            if ir + 1 < nr && cells[(ir + 1) * nw + iw].all_real != here.all_real {
                edges.push((ir * nw + iw, (ir + 1) * nw + iw));
            }
        }
    }
    let boundary = edges
        .into_par_iter()
        .map(|(a, b)| {
            let (pa, pb) = (&cells[a], &cells[b]);
            let (dr, dw) = (pb.rho - pa.rho, pb.omega - pa.omega);
            let len = dr.hypot(dw);
            let s = bisect_transition(0.0, 1.0, tolerances::EP_BISECTION / len, |s| {
                real_at(kind, n, lambda, pa.rho + s * dr, pa.omega + s * dw)
            })?;
            let (rho, omega) = (pa.rho + s * dr, pa.omega + s * dw);
            Ok(BoundaryPoint {
                rho,
                omega,
                robin: robin_from_gamma(rho, omega).ok(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EpMap {
        rho_axis: rho_axis.clone(),
        omega_axis: omega_axis.clone(),
        cells,
        boundary,
    })
}

/// Reality together with bounded eigenvector conditioning.
pub fn diagonalizable_real(h: &ComplexMatrix) -> Result<bool> {
    let p = classify(h, Vec::new())?;
    Ok(p.all_real && p.condition_estimate < tolerances::CONDITION_LIMIT)
}

/// `λ` in `bracket` where the real-and-diagonalizable classification flips.
pub fn lambda_transition(kind: ModelKind, n: usize, rho: f64, omega: f64, bracket: (f64, f64)) -> Result<f64> {
    bisect_transition(bracket.0, bracket.1, tolerances::EP_BISECTION, |l| {
        diagonalizable_real(&build_hamiltonian(&HamiltonianSpec::new(kind, n, l, rho, omega)?)?)
    })
}

/// Number of `ω` grid points with real spectrum at fixed `ρ`.
pub fn real_omega_count(kind: ModelKind, n: usize, lambda: f64, rho: f64, omega_axis: &Axis) -> Result<usize> {
    let flags = omega_axis
        .values()
        .into_par_iter()
        .map(|w| real_at(kind, n, lambda, rho, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(flags.into_iter().filter(|&r| r).count())
}

/// Smallest `ρ` where the real-spectrum `ω`-set shrinks below one grid step
/// (at most one grid point survives), bisected to `tol`.
pub fn critical_rho(
    kind: ModelKind,
    n: usize,
    lambda: f64,
    rho_range: (f64, f64),
    omega_axis: &Axis,
    tol: f64,
) -> Result<f64> {
    if omega_axis.count < 2 || omega_axis.max <= omega_axis.min {
        return Err(Error::BracketFailure(
            "the omega probe must span a nonempty interval".into(),
        ));
    }
    let vanished = |rho: f64| Ok(real_omega_count(kind, n, lambda, rho, omega_axis)? <= 1);
    if vanished(rho_range.0)? || !vanished(rho_range.1)? {
        return Err(Error::BracketFailure(format!(
            "real omega-set does not vanish across rho in [{}, {}]",
            rho_range.0, rho_range.1
        )));
    }
    bisect_transition(rho_range.0, rho_range.1, tol, |r| vanished(r).map(|v| !v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub re_count: usize,
    pub im_count: usize,
}

impl Window {
    pub fn re_axis(&self) -> Result<Axis> {
        Axis::new("re", self.re_min, self.re_max, self.re_count)
    }

    pub fn im_axis(&self) -> Result<Axis> {
        Axis::new("im", self.im_min, self.im_max, self.im_count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumPoint {
    pub lambda: Complex64,
    /// `‖(H − λ)⁻¹‖₂`, infinite at eigenvalues.
    pub resnorm: f64,
    /// `1/dist(λ, σ(H))`.
    pub lower_bound: f64,
    /// `κ/dist(λ, σ(H))`, present when `κ` was supplied.
    pub upper_bound: Option<f64>,
    pub enclosure_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumGrid {
    pub window: Window,
    pub kappa: Option<f64>,
    /// `Im` outer, `Re` inner.
    pub points: Vec<PseudospectrumPoint>,
}

impl PseudospectrumGrid {
    pub fn all_enclosed(&self) -> bool {
        self.points.iter().all(|p| p.enclosure_ok != Some(false))
    }
}

pub fn pseudospectrum(h: &ComplexMatrix, window: &Window, kappa: Option<f64>) -> Result<PseudospectrumGrid> {
    let n = check_square(h)?;
    let (re, im) = (window.re_axis()?, window.im_axis()?);
    if let Some(k) = kappa {
        if k.is_nan() || k < 1.0 - tolerances::RESIDUAL {
            return Err(Error::InvalidParameter(format!("kappa must be at least 1, got {k}")));
        }
    }
    let spectrum = numerics::eigenvalues(h)?;
    let lambdas: Vec<Complex64> = im
        .values()
        .into_iter()
        .flat_map(|y| re.values().into_iter().map(move |x| Complex64::new(x, y)))
        .collect();
    let slack = tolerances::ENCLOSURE_SLACK;
    let points = lambdas
        .into_par_iter()
        .map(|lambda| {
            let dist = spectrum
                .iter()
                .map(|mu| (mu - lambda).norm())
                .fold(f64::INFINITY, f64::min);
            let shifted = h - ComplexMatrix::identity(n, n) * lambda;
            let smin = numerics::min_singular_value(&shifted)?;
            let resnorm = if smin == 0.0 || dist == 0.0 {
                f64::INFINITY
            } else {
                1.0 / smin
            };
            let lower_bound = 1.0 / dist;
            let upper_bound = kappa.map(|k| k / dist);
            let enclosure_ok = upper_bound.map(|upper| {
                dist == 0.0 || (lower_bound <= resnorm * (1.0 + slack) && resnorm <= upper * (1.0 + slack))
            });
            Ok(PseudospectrumPoint {
                lambda,
                resnorm,
                lower_bound,
                upper_bound,
                enclosure_ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PseudospectrumGrid {
        window: *window,
        kappa,
        points,
    })
}
