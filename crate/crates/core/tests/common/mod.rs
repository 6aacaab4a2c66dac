#![allow(dead_code)]

use num_complex::Complex64;
use ptssh::models::{build_hamiltonian, HamiltonianSpec, ModelKind};
use ptssh::numerics;
use ptssh::ComplexMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Triple-loop product, independent of the library's matrix kernels.
pub fn naive_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    let m = b.ncols();
    let mut out = ComplexMatrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = z(0.0, 0.0);
            for l in 0..a.ncols() {
                acc += a[(i, l)] * b[(l, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn naive_adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn naive_frobenius(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for v in a.iter() {
        s += v.re * v.re + v.im * v.im;
    }
    s.sqrt()
}

/// Dieudonné residual computed without the library.
pub fn oracle_residual(h: &ComplexMatrix, p: &ComplexMatrix) -> f64 {
    let d = naive_mul(&naive_adjoint(h), p) - naive_mul(p, h);
    naive_frobenius(&d) / (naive_frobenius(h) * naive_frobenius(p)).max(1.0)
}

/// Hamiltonian written out entry by entry from the model definitions.
pub fn oracle_hamiltonian(kind: ModelKind, n: usize, lambda: f64, rho: f64, omega: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    h[(0, 0)] = z(rho, omega);
    h[(n - 1, n - 1)] = z(rho, -omega);
    let lambda = if kind == ModelKind::Robin { 0.0 } else { lambda };
    for site in 1..n {
        let (upper, lower) = match kind {
            ModelKind::Dssh => (-1.0 - lambda, -1.0 + lambda),
            _ => {
                let t = if site % 2 == 1 { -1.0 - lambda } else { -1.0 + lambda };
                (t, t)
            }
        };
        h[(site - 1, site)] = z(upper, 0.0);
        h[(site, site - 1)] = z(lower, 0.0);
    }
    h
}

/// Robin element table written with `ξ = ρ − iω`, 1-based `(i, j)`.
pub fn oracle_robin(n: usize, rho: f64, omega: f64, k: usize) -> ComplexMatrix {
    let xi = z(rho, -omega);
    let mut p = ComplexMatrix::zeros(n, n);
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            if (i + j - n as i64 - 1).abs() > n as i64 - k as i64 {
                continue;
            }
            let d = j - i;
            let v = if d >= k as i64 {
                z(0.0, omega) * (-xi).powi((d - k as i64) as i32)
            } else if -d >= k as i64 {
                z(0.0, -omega) * (-xi.conj()).powi((-d - k as i64) as i32)
            } else if (i + j - k as i64).rem_euclid(2) == 0 {
                z(rho, 0.0)
            } else {
                z(1.0, 0.0)
            };
            p[(i as usize - 1, j as usize - 1)] = v;
        }
    }
    p
}

/// Polynomial roots by Durand–Kerner iteration; coefficients constant term
/// first, leading coefficient nonzero.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(z(0.0, 0.0), |acc, &c| acc * x + c);
    let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = z(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powi(k as i32) * bound).collect();
    for _ in 0..5000 {
        let mut delta = 0.0_f64;
        for i in 0..deg {
            let mut den = z(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    // a few Newton polishing steps
    let deriv: Vec<Complex64> = (1..=deg).map(|k| monic[k] * k as f64).collect();
    let eval_d = |x: Complex64| deriv.iter().rev().fold(z(0.0, 0.0), |acc, &c| acc * x + c);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = eval_d(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    roots
}

/// Greedy nearest-neighbour pairing distance between two multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for x in a {
        let (best, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[best] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn hamiltonian(kind: ModelKind, n: usize, lambda: f64, rho: f64, omega: f64) -> ComplexMatrix {
    build_hamiltonian(&HamiltonianSpec::new(kind, n, lambda, rho, omega).unwrap()).unwrap()
}

/// Real and simple spectrum in the sense used throughout the tests.
pub fn real_simple(h: &ComplexMatrix) -> bool {
    let mut ev = numerics::eigenvalues(h).unwrap();
    let radius = ev.iter().map(|e| e.norm()).fold(0.0, f64::max);
    if ev.iter().any(|e| e.im.abs() >= 1e-8 * radius.max(1.0)) {
        return false;
    }
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    ev.windows(2).all(|w| w[1].re - w[0].re > 1e-6)
}

/// Draws `(λ, ρ, ω)` until the Hamiltonian has real simple spectrum.
pub fn draw_real_point(
    r: &mut ChaCha8Rng,
    kind: ModelKind,
    n: usize,
    lambda_box: f64,
    gamma_box: f64,
) -> (f64, f64, f64) {
    loop {
        let lambda = if kind == ModelKind::Robin {
            0.0
        } else {
            r.gen_range(-lambda_box..lambda_box)
        };
        let rho = r.gen_range(-gamma_box..gamma_box);
        let omega = r.gen_range(-gamma_box..gamma_box);
        if real_simple(&hamiltonian(kind, n, lambda, rho, omega)) {
            return (lambda, rho, omega);
        }
    }
}

pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}
