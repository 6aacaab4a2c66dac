//! Brute-force solutions of `H†X = XH`.
//!
//! Hermitian matrices are handled in real coordinates: the diagonal, then
//! `√2·Re` and `√2·Im` of each strictly upper entry in row-major order. In
//! these coordinates the Frobenius inner product is the Euclidean one. For
//! hermitian `X` the image `H†X − XH` is anti-hermitian, so `−i(H†X − XH)`
//! lands back in the same coordinate space and the map is a square real
//! `n² × n²` matrix.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ComplexMatrix, HamiltonianSpec};
use crate::numerics::{self, check_square, frobenius};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetSource {
    Oracle,
    ClosedForm,
    BandRestricted,
}

#[derive(Debug, Clone)]
pub struct PseudometricSet {
    pub matrices: Vec<ComplexMatrix>,
    pub source: SetSource,
    pub residuals: Vec<f64>,
    pub spec: Option<HamiltonianSpec>,
    /// Condition number of the real Gram matrix `Re tr(P_a† P_b)`.
    pub gram_condition: f64,
}

impl PseudometricSet {
    pub fn new(
        h: &ComplexMatrix,
        matrices: Vec<ComplexMatrix>,
        source: SetSource,
        spec: Option<HamiltonianSpec>,
    ) -> Result<Self> {
        let residuals = matrices.iter().map(|p| residual(h, p)).collect::<Result<Vec<_>>>()?;
        let gram_condition = gram_condition(&matrices)?;
        Ok(Self {
            matrices,
            source,
            residuals,
            spec,
            gram_condition,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BandStatus {
    BasisFound,
    CutoffViolation,
    Empty,
}

#[derive(Debug, Clone)]
pub struct BandSolveResult {
    pub status: BandStatus,
    pub matrices: Vec<ComplexMatrix>,
    /// Smallest `‖H†X − XH‖_F` over unit-Frobenius hermitian `X` of the ansatz.
    pub violation_norm: f64,
    /// `‖H‖_F`, the scale the violation is measured against.
    pub scale: f64,
    /// Dimension of the band kernel when hermiticity and the ansatz are dropped.
    pub unconstrained_dimension: usize,
}

/// `‖H†P − PH‖_F / max(1, ‖H‖_F‖P‖_F)`.
pub fn residual(h: &ComplexMatrix, p: &ComplexMatrix) -> Result<f64> {
    let n = check_square(h)?;
    let m = check_square(p)?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    let r = frobenius(&(h.adjoint() * p - p * h));
    Ok(r / (frobenius(h) * frobenius(p)).max(1.0))
}

pub fn hermitian_dimension(n: usize) -> usize {
    n * n
}

pub fn hermitian_to_coords(x: &ComplexMatrix) -> DVector<f64> {
    let n = x.nrows();
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(|i| x[(i, i)].re));
    for i in 0..n {
        for j in i + 1..n {
            out.push(s2 * x[(i, j)].re);
            out.push(s2 * x[(i, j)].im);
        }
    }
    DVector::from_vec(out)
}

pub fn coords_to_hermitian(n: usize, v: &DVector<f64>) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut x = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        x[(i, i)] = Complex64::new(v[i], 0.0);
    }
    let mut at = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex64::new(s * v[at], s * v[at + 1]);
            x[(i, j)] = z;
            x[(j, i)] = z.conj();
            at += 2;
        }
    }
    x
}

/// Real matrix of `X ↦ −i(H†X − XH)` in hermitian coordinates.
pub fn dieudonne_operator(h: &ComplexMatrix) -> Result<DMatrix<f64>> {
    let n = check_square(h)?;
    let dim = hermitian_dimension(n);
    let hd = h.adjoint();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut op = DMatrix::<f64>::zeros(dim, dim);
    let mut unit = DVector::<f64>::zeros(dim);
    for b in 0..dim {
        unit[b] = 1.0;
        let e = coords_to_hermitian(n, &unit);
        unit[b] = 0.0;
        let y = (&hd * &e - &e * h) * minus_i;
        op.set_column(b, &hermitian_to_coords(&y));
    }
    Ok(op)
}

/// Right singular vectors and singular values, sorted by descending value.
/// Rows are zero-padded so that the full right basis is available.
fn sorted_svd(m: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let cols = m.ncols();
    let padded;
    let a = if m.nrows() < cols {
        let mut p = DMatrix::<f64>::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = SVD::try_new(
        a.clone(),
        false,
        true,
        f64::EPSILON,
        tolerances::MAX_ITER_PER_DIM * cols.max(1),
    )
    .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let v_t = svd.v_t.as_ref().expect("requested right vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = order.iter().map(|&i| v_t.row(i).transpose().into_owned()).collect();
    Ok((values, vectors))
}

/// Number of singular values at or below `tol`; errors out when the values on
/// both sides of `tol` sit within a factor 10 of it.
fn numerical_nullity(values: &[f64], tol: f64) -> Result<usize> {
    let nullity = values.iter().filter(|&&s| s <= tol).count();
    let below = values
        .iter()
        .copied()
        .filter(|&s| s <= tol)
        .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.max(s))));
    let above = values
        .iter()
        .copied()
        .filter(|&s| s > tol)
        .fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.min(s))));
    if let (Some(lo), Some(hi)) = (below, above) {
        if lo >= tol / 10.0 && hi <= tol * 10.0 {
            return Err(Error::RankAmbiguous { value: hi, tol });
        }
    }
    Ok(nullity)
}

/// Real-linear basis of the hermitian solutions of `H†X = XH`.
///
/// `tol = None` selects `n²·ε·σ_max`. The basis is orthonormal in the
/// Frobenius inner product.
pub fn pseudometric_kernel(h: &ComplexMatrix, tol: Option<f64>) -> Result<PseudometricSet> {
    let n = check_square(h)?;
    if let Some(t) = tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::InvalidParameter("kernel tolerance must be positive".into()));
        }
    }
    let op = dieudonne_operator(h)?;
    let (values, vectors) = sorted_svd(&op)?;
    let tol = tol.unwrap_or((n * n) as f64 * f64::EPSILON * values.first().copied().unwrap_or(0.0));
    let nullity = numerical_nullity(&values, tol)?;
    let dim = values.len();
    let matrices = vectors[dim - nullity..]
        .iter()
        .map(|v| coords_to_hermitian(n, v))
        .collect();
    PseudometricSet::new(h, matrices, SetSource::Oracle, None)
}

/// `Θ = Σ κ_k v_k v_k†` over unit eigenvectors of `H†`, ascending eigenvalue order.
pub fn eigvec_metric(h: &ComplexMatrix, kappas: &[f64]) -> Result<ComplexMatrix> {
    let n = check_square(h)?;
    if kappas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: kappas.len(),
        });
    }
    let dec = numerics::eig(&h.adjoint())?;
    let radius = dec.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let im = dec.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if im > tolerances::SPECTRAL * radius.max(1.0) {
        return Err(Error::SpectrumNotRealSimple(format!("max |Im λ| = {im:.3e}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].re.total_cmp(&dec.eigenvalues[b].re));
    for w in order.windows(2) {
        let gap = dec.eigenvalues[w[1]].re - dec.eigenvalues[w[0]].re;
        if gap <= tolerances::SIMPLE_GAP {
            return Err(Error::SpectrumNotRealSimple(format!("eigenvalue gap {gap:.3e}")));
        }
    }
    let mut theta = ComplexMatrix::zeros(n, n);
    for (&k, &kappa) in order.iter().zip(kappas) {
        let v = dec.right_eigenvectors.column(k);
        theta += (v * v.adjoint()) * Complex64::new(kappa, 0.0);
    }
    Ok((&theta + theta.adjoint()) * Complex64::new(0.5, 0.0))
}

fn complex_to_real(x: &ComplexMatrix) -> DVector<f64> {
    DVector::from_iterator(2 * x.len(), x.iter().flat_map(|z| [z.re, z.im]))
}

/// Orthonormal basis (as columns) of the real span of `mats`.
fn real_span_basis(mats: &[ComplexMatrix]) -> Result<DMatrix<f64>> {
    if mats.is_empty() {
        return Ok(DMatrix::zeros(0, 0));
    }
    let cols: Vec<DVector<f64>> = mats.iter().map(complex_to_real).collect();
    let a = DMatrix::from_columns(&cols);
    let svd = SVD::try_new(a, true, false, f64::EPSILON, tolerances::MAX_ITER_PER_DIM * cols.len())
        .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let u = svd.u.as_ref().expect("requested left vectors");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tolerances::SPECTRAL * smax)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if keep.is_empty() {
        return Ok(DMatrix::zeros(cols[0].len(), 0));
    }
    Ok(DMatrix::from_columns(&keep))
}

/// Largest relative distance of a member of `members` from the real span of `basis`.
pub fn projection_defect(basis: &[ComplexMatrix], members: &[ComplexMatrix]) -> Result<f64> {
    let q = real_span_basis(basis)?;
    let mut worst = 0.0_f64;
    for m in members {
        let x = complex_to_real(m);
        let norm = x.norm();
        if norm == 0.0 {
            continue;
        }
        let resid = if q.ncols() == 0 {
            norm
        } else {
            (&x - &q * (q.transpose() * &x)).norm()
        };
        worst = worst.max(resid / norm);
    }
    Ok(worst)
}

/// `max(defect(a → b), defect(b → a))`.
pub fn mutual_projection_defect(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Result<f64> {
    Ok(projection_defect(a, b)?.max(projection_defect(b, a)?))
}

/// Least-squares real coefficients `c` with `Σ c_i basis_i ≈ target`.
pub fn express_in_basis(basis: &[ComplexMatrix], target: &ComplexMatrix) -> Result<Vec<f64>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<DVector<f64>> = basis.iter().map(complex_to_real).collect();
    let a = DMatrix::from_columns(&cols);
    let svd = SVD::try_new(a, true, true, f64::EPSILON, tolerances::MAX_ITER_PER_DIM * cols.len())
        .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let eps = f64::EPSILON * svd.singular_values.iter().copied().fold(0.0, f64::max) * cols.len() as f64;
    let c = svd
        .solve(&complex_to_real(target), eps)
        .map_err(|_| Error::NonConvergence("least-squares solve"))?;
    Ok(c.iter().copied().collect())
}

fn gram_condition(mats: &[ComplexMatrix]) -> Result<f64> {
    if mats.is_empty() {
        return Ok(1.0);
    }
    let cols: Vec<DVector<f64>> = mats.iter().map(complex_to_real).collect();
    let a = DMatrix::from_columns(&cols);
    let g = a.transpose() * a;
    let svd = SVD::try_new(g, false, false, f64::EPSILON, tolerances::MAX_ITER_PER_DIM * cols.len())
        .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if smin > 0.0 { smax / smin } else { f64::INFINITY })
}

/// Hermitian solutions supported on the outer `2(n−k)+1` antidiagonals.
///
/// The unknowns follow the product form `X_ij = c_ij · w_ij` with `c` real
/// symmetric and `w` the Robin pseudometric of index `k` at `γ = H₁₁`; the
/// positions where `w` vanishes drop out. With `chessboard` the support is
/// further cut to the chessboard pattern of [`crate::closed_form::zero_support`].
pub fn band_restricted_solve(h: &ComplexMatrix, k: usize, chessboard: bool) -> Result<BandSolveResult> {
    let n = check_square(h)?;
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let gamma = h[(0, 0)];
    let w = crate::closed_form::robin_pseudometric(n, gamma.re, gamma.im, k)?;
    let scale = frobenius(h);
    let in_band = |i: usize, j: usize| (i + j + 2).abs_diff(n + 1) <= n - k;
    let chess = |i: usize, j: usize| crate::closed_form::chessboard_allows(n, k, i + 1, j + 1);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            if in_band(i, j) && w[(i, j)].norm() > 0.0 && (!chessboard || chess(i, j)) {
                pairs.push((i, j));
            }
        }
    }
    let unconstrained_dimension = band_kernel_dimension(h, k)?;
    if pairs.is_empty() {
        return Ok(BandSolveResult {
            status: BandStatus::Empty,
            matrices: Vec::new(),
            violation_norm: 0.0,
            scale,
            unconstrained_dimension,
        });
    }

    // Each unknown c_ij contributes a unit-Frobenius hermitian matrix; the
    // supports are disjoint, so the columns are orthonormal.
    let hd = h.adjoint();
    let minus_i = Complex64::new(0.0, -1.0);
    let units: Vec<ComplexMatrix> = pairs
        .iter()
        .map(|&(i, j)| {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(i, j)] = w[(i, j)];
            e[(j, i)] = w[(i, j)].conj();
            let norm = frobenius(&e);
            e / Complex64::new(norm, 0.0)
        })
        .collect();
    let cols: Vec<DVector<f64>> = units
        .iter()
        .map(|e| hermitian_to_coords(&((&hd * e - e * h) * minus_i)))
        .collect();
    let op = DMatrix::from_columns(&cols);
    let (values, vectors) = sorted_svd(&op)?;
    let m = pairs.len();
    // Missing singular values (more unknowns than equations) are exact zeros.
    let sigma = |r: usize| values.get(r).copied().unwrap_or(0.0);
    let violation_norm = sigma(m - 1);
    let threshold = tolerances::SPECTRAL * scale;
    if violation_norm > threshold {
        return Ok(BandSolveResult {
            status: BandStatus::CutoffViolation,
            matrices: Vec::new(),
            violation_norm,
            scale,
            unconstrained_dimension,
        });
    }
    let matrices = (0..m)
        .filter(|&r| sigma(r) <= threshold)
        .map(|r| {
            let c = &vectors[r];
            let lead = c.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
            let sign = if lead < 0.0 { -1.0 } else { 1.0 };
            let mut x = ComplexMatrix::zeros(n, n);
            for (cr, e) in c.iter().zip(&units) {
                x += e * Complex64::new(sign * cr, 0.0);
            }
            x
        })
        .collect();
    Ok(BandSolveResult {
        status: BandStatus::BasisFound,
        matrices,
        violation_norm,
        scale,
        unconstrained_dimension,
    })
}

/// Dimension of `{X : H†X = XH}` over complex `X` supported on the band.
fn band_kernel_dimension(h: &ComplexMatrix, k: usize) -> Result<usize> {
    let n = h.nrows();
    let hd = h.adjoint();
    let mut positions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (i + j + 2).abs_diff(n + 1) <= n - k {
                positions.push((i, j));
            }
        }
    }
    // Complex unknowns as pairs of real ones; complex equations as pairs of real ones.
    let mut cols = Vec::with_capacity(2 * positions.len());
    for &(i, j) in &positions {
        for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(i, j)] = unit;
            cols.push(complex_to_real(&(&hd * &e - &e * h)));
        }
    }
    let op = DMatrix::from_columns(&cols);
    let (values, _) = sorted_svd(&op)?;
    let threshold = tolerances::SPECTRAL * frobenius(h).max(1.0);
    let rank = values.iter().filter(|&&s| s > threshold).count();
    Ok((cols.len() - rank) / 2)
}
