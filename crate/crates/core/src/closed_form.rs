//! Explicit pseudometric families.
//!
//! `P⁽ᵏ⁾` lives on the `2(n−k)+1` antidiagonals closest to the main
//! antidiagonal, `|i+j−n−1| ≤ n−k`. Inside that band, entries with
//! `|i−j| < k` form the interior and the rest form two wedges. All formulas
//! below use 1-based `(i, j)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dieudonne::{residual, PseudometricSet, SetSource};
use crate::error::{Error, Result};
use crate::models::{build_hamiltonian, ComplexMatrix, HamiltonianSpec, ModelKind};
use crate::tolerances;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_index(n: usize, k: usize) -> Result<()> {
    if n == 0 || k < 1 || k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    Ok(())
}

fn in_band(n: usize, k: usize, i: usize, j: usize) -> bool {
    (i + j).abs_diff(n + 1) <= n - k
}

fn parity_odd(x: isize) -> bool {
    x.rem_euclid(2) == 1
}

/// Band and chessboard conditions together: `|i−j| < k` and `i+j−k` odd.
pub fn chessboard_allows(n: usize, k: usize, i: usize, j: usize) -> bool {
    in_band(n, k, i, j) && i.abs_diff(j) < k && parity_odd(i as isize + j as isize - k as isize)
}

/// Where `P⁽ᵏ⁾` may be nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPattern {
    pub n: usize,
    pub k: usize,
    pub chessboard: bool,
}

impl SupportPattern {
    /// 1-based predicate.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        if i < 1 || j < 1 || i > self.n || j > self.n {
            return false;
        }
        if self.chessboard {
            chessboard_allows(self.n, self.k, i, j)
        } else {
            in_band(self.n, self.k, i, j)
        }
    }

    /// All allowed 1-based positions in row-major order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (1..=self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.allowed(i, j))
            .collect()
    }
}

/// Band-plus-chessboard for the `γ = 0` SSH and dSSH families, band only for Robin.
pub fn zero_support(kind: ModelKind, n: usize, k: usize) -> Result<SupportPattern> {
    check_index(n, k)?;
    Ok(SupportPattern {
        n,
        k,
        chessboard: kind != ModelKind::Robin,
    })
}

/// Robin pseudometric `P⁽ᵏ⁾` at `γ = ρ + iω`.
///
/// Interior: `ρ` where `i+j−k` is even, `1` where it is odd. Upper wedge
/// `j−i ≥ k`: `iω(−γ*)^(j−i−k)`. Lower wedge: the conjugate transpose.
pub fn robin_pseudometric(n: usize, rho: f64, omega: f64, k: usize) -> Result<ComplexMatrix> {
    check_index(n, k)?;
    let gamma = Complex64::new(rho, omega);
    let iw = Complex64::new(0.0, omega);
    let mut powers = vec![c(1.0)];
    for p in 1..n {
        let next = powers[p - 1] * (-gamma.conj());
        powers.push(next);
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i..=n {
            if !in_band(n, k, i, j) {
                continue;
            }
            let v = if j - i >= k {
                iw * powers[j - i - k]
            } else if parity_odd(i as isize + j as isize - k as isize) {
                c(1.0)
            } else {
                c(rho)
            };
            out[(i - 1, j - 1)] = v;
            out[(j - 1, i - 1)] = v.conj();
        }
    }
    Ok(out)
}

fn require_chain(kind: ModelKind, n: usize) -> Result<()> {
    if kind == ModelKind::Robin {
        return Err(Error::InvalidParameter(
            "this family is defined for the SSH and dSSH chains".into(),
        ));
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidDimension {
            n,
            reason: "SSH and dSSH chains need an even number of sites",
        });
    }
    Ok(())
}

/// Real symmetric `P⁽ᵏ⁾` of the `γ = 0` chain, supported on the chessboard.
pub fn chessboard_pseudometric(kind: ModelKind, n: usize, lambda: f64, k: usize) -> Result<ComplexMatrix> {
    require_chain(kind, n)?;
    check_index(n, k)?;
    let (p, m) = (1.0 + lambda, 1.0 - lambda);
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            if !chessboard_allows(n, k, i, j) {
                continue;
            }
            // i + j - k is odd and positive on the support
            let half = (i + j - k - 1) / 2;
            let v = match kind {
                ModelKind::Dssh => p.powi(half as i32) * m.powi((n - k - half) as i32),
                _ if k == 1 || k == n => 1.0,
                _ if k.is_multiple_of(2) => {
                    if half.is_multiple_of(2) {
                        p
                    } else {
                        m
                    }
                }
                _ => {
                    if ((k - 1 - i.abs_diff(j)) / 2).is_multiple_of(2) {
                        p
                    } else {
                        m
                    }
                }
            };
            out[(i - 1, j - 1)] = c(v);
        }
    }
    Ok(out)
}

/// `(1±λ)` weight multiplying the Robin element in the general families.
///
/// `d` is the number of missing factors of `(ρ, ω)` relative to the band
/// depth `n−k`, `t = i+j−n−1` the antidiagonal offset.
fn general_weight(kind: ModelKind, n: usize, k: usize, lambda: f64, i: usize, j: usize) -> Result<f64> {
    let (p, m) = (1.0 + lambda, 1.0 - lambda);
    let diff = i.abs_diff(j);
    let sum = (i + j) as isize;
    let degree = if diff >= k {
        1 + diff - k
    } else if parity_odd(sum - k as isize) {
        0
    } else {
        1
    };
    let d = (n - k) as isize - degree as isize;
    let t = sum - (n as isize + 1);
    let bad = || Error::InvalidParameter(format!("no weight for position ({i}, {j}) of P({k}), n = {n}"));
    if d < 0 {
        return Err(bad());
    }
    match kind {
        ModelKind::Dssh => {
            if (d + t).rem_euclid(2) != 0 || t.abs() > d {
                return Err(bad());
            }
            Ok(p.powi(((d + t) / 2) as i32) * m.powi(((d - t) / 2) as i32))
        }
        _ => match d {
            0 => Ok(1.0),
            1 => {
                let f = (k as isize - diff as isize).div_euclid(2);
                Ok(if f.rem_euclid(2) == 0 { p } else { m })
            }
            2 => {
                let half = (sum - k as isize - 1).div_euclid(2);
                Ok(m * if half.rem_euclid(2) == 0 { p } else { m })
            }
            _ => Err(bad()),
        },
    }
}

/// The three outermost families `P⁽ⁿ⁻²⁾, P⁽ⁿ⁻¹⁾, P⁽ⁿ⁾` for general `(λ, γ)`.
///
/// Each element is a `(1±λ)` monomial times the Robin element at the same
/// position. Every instance is checked against the Hamiltonian before it is
/// returned.
pub fn general_pseudometric(
    kind: ModelKind,
    n: usize,
    lambda: f64,
    rho: f64,
    omega: f64,
    k: usize,
) -> Result<ComplexMatrix> {
    require_chain(kind, n)?;
    check_index(n, k)?;
    if k + 2 < n {
        return Err(Error::Cutoff { k, n });
    }
    let w = robin_pseudometric(n, rho, omega, k)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            if in_band(n, k, i, j) {
                out[(i - 1, j - 1)] = w[(i - 1, j - 1)] * general_weight(kind, n, k, lambda, i, j)?;
            }
        }
    }
    let h = build_hamiltonian(&HamiltonianSpec::new(kind, n, lambda, rho, omega)?)?;
    let r = residual(&h, &out)?;
    if r.is_nan() || r > tolerances::CLOSED_FORM {
        return Err(Error::CertificationFailed { residual: r });
    }
    Ok(out)
}

/// Whichever closed form covers `(spec, k)`.
///
/// `λ = 0` uses the Robin table for every kind, `γ = 0` the chessboard
/// family, anything else the general families (and [`Error::Cutoff`] below
/// `k = n−2`).
pub fn closed_form_pseudometric(spec: &HamiltonianSpec, k: usize) -> Result<ComplexMatrix> {
    spec.validate()?;
    check_index(spec.n, k)?;
    if spec.lambda == 0.0 {
        robin_pseudometric(spec.n, spec.rho, spec.omega, k)
    } else if spec.rho == 0.0 && spec.omega == 0.0 {
        chessboard_pseudometric(spec.kind, spec.n, spec.lambda, k)
    } else {
        general_pseudometric(spec.kind, spec.n, spec.lambda, spec.rho, spec.omega, k)
    }
}

/// Indices available in closed form for `spec`.
pub fn available_indices(spec: &HamiltonianSpec) -> Vec<usize> {
    let n = spec.n;
    if spec.lambda == 0.0 || (spec.rho == 0.0 && spec.omega == 0.0) {
        (1..=n).collect()
    } else {
        (n.saturating_sub(2).max(1)..=n).collect()
    }
}

/// Closed-form set for the requested indices (all available ones when `None`).
pub fn closed_form_set(spec: &HamiltonianSpec, ks: Option<&[usize]>) -> Result<PseudometricSet> {
    let all = available_indices(spec);
    let ks = ks.unwrap_or(&all);
    let matrices = ks
        .iter()
        .map(|&k| closed_form_pseudometric(spec, k))
        .collect::<Result<Vec<_>>>()?;
    let h = build_hamiltonian(spec)?;
    PseudometricSet::new(&h, matrices, SetSource::ClosedForm, Some(*spec))
}
