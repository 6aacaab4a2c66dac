//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::ComplexMatrix;
use crate::tolerances;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm right eigenvectors, one per column, in eigenvalue order.
    pub right_eigenvectors: ComplexMatrix,
    /// `cond₂(V)`; `f64::INFINITY` when `V` is numerically singular.
    pub condition_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct HermitianFactor {
    /// `Ω` with `Ω†Ω = Θ` when `success`; otherwise the (meaningless) zero matrix.
    pub omega: ComplexMatrix,
    pub omega_inverse: Option<ComplexMatrix>,
    /// Eigenvalues of `Θ`, ascending.
    pub eigenvalues: Vec<f64>,
    pub success: bool,
}

fn max_iter(n: usize) -> usize {
    tolerances::MAX_ITER_PER_DIM * n.max(1)
}

pub fn check_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(a.nrows())
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖A − A†‖_F / ‖A‖_F` (zero for the zero matrix).
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    let scale = frobenius(a);
    if scale == 0.0 {
        return 0.0;
    }
    frobenius(&(a - a.adjoint())) / scale
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.nrows().max(a.ncols());
    let svd = SVD::try_new(a.clone(), false, false, f64::EPSILON, max_iter(n))
        .ok_or(Error::NonConvergence("singular value decomposition"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn min_singular_value(a: &ComplexMatrix) -> Result<f64> {
    check_square(a)?;
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    Ok(*singular_values(a)?.last().unwrap())
}

pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(singular_values(a)?[0])
}

/// Complex Schur form `A = QTQ†`.
///
/// The QR iteration can stall on exactly structured input (the three-site
/// path graph is one case); the retries run on `A + sI` for a few shifts and
/// remove `s` from the diagonal of `T` afterwards.
fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.nrows();
    let scale = frobenius(a).max(1.0);
    let shifts = [
        Complex64::new(0.0, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_PI, 0.0),
        Complex64::new(-0.577_215_665, 0.141_421_356),
        Complex64::new(0.0, 0.271_828_183),
    ];
    for s in shifts {
        let s = s * scale;
        let shifted = a + ComplexMatrix::identity(n, n) * s;
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, max_iter(n)) {
            let (q, mut t) = schur.unpack();
            for i in 0..n {
                t[(i, i)] -= s;
            }
            return Ok((q, t));
        }
    }
    Err(Error::NonConvergence("complex Schur iteration"))
}

/// Eigenvalues only (complex Schur form, no eigenvectors).
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (_, t) = schur(a)?;
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

pub fn eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: Vec::new(),
            right_eigenvectors: ComplexMatrix::zeros(0, 0),
            condition_estimate: 1.0,
        });
    }
    let (q, t) = schur(a)?;
    let eigenvalues: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();

    // Eigenvectors of the triangular factor by back substitution. Coalescing
    // eigenvalues make the pivots vanish; clamping them keeps the vectors
    // finite and lets the condition estimate blow up instead.
    let floor = f64::EPSILON * frobenius(&t).max(f64::MIN_POSITIVE);
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let mu = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - mu;
            if den.norm() < floor {
                den = Complex64::new(floor, 0.0);
            }
            y[(i, k)] = -acc / den;
        }
    }
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 && norm.is_finite() {
            col /= Complex64::new(norm, 0.0);
        }
    }

    let condition_estimate = if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        let s = singular_values(&v)?;
        let (smax, smin) = (s[0], s[n - 1]);
        if smin <= (n as f64) * f64::EPSILON * smax {
            f64::INFINITY
        } else {
            smax / smin
        }
    } else {
        f64::INFINITY
    };

    Ok(EigenDecomposition {
        eigenvalues,
        right_eigenvectors: v,
        condition_estimate,
    })
}

/// `Θ = Ω†Ω` through the spectral square root `Ω = diag(√μ)U†`.
///
/// Positivity means every eigenvalue exceeds `POSITIVITY · ‖Θ‖₂`.
pub fn hermitian_factor(theta: &ComplexMatrix) -> Result<HermitianFactor> {
    let n = check_square(theta)?;
    let defect = hermitian_defect(theta);
    if defect > tolerances::RESIDUAL {
        return Err(Error::NotHermitian { defect });
    }
    let sym = (theta + theta.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, max_iter(n))
        .ok_or(Error::NonConvergence("hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let norm2 = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let success = n > 0 && norm2 > 0.0 && eigenvalues[0] > tolerances::POSITIVITY * norm2;
    if !success {
        return Ok(HermitianFactor {
            omega: ComplexMatrix::zeros(n, n),
            omega_inverse: None,
            eigenvalues,
            success: false,
        });
    }
    let root = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&m| Complex64::new(m.sqrt(), 0.0)));
    let u = &eig.eigenvectors;
    let omega = ComplexMatrix::from_diagonal(&root) * u.adjoint();
    let inv_root = root.map(|r| Complex64::new(1.0, 0.0) / r);
    let omega_inverse = u * ComplexMatrix::from_diagonal(&inv_root);
    Ok(HermitianFactor {
        omega,
        omega_inverse: Some(omega_inverse),
        eigenvalues,
        success: true,
    })
}

/// Coefficients of `det(xI − H)`, constant term first, from the three-term
/// recurrence over leading principal minors.
pub fn charpoly_tridiagonal(h: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(h)?;
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 && h[(i, j)] != Complex64::new(0.0, 0.0) {
                return Err(Error::NotTridiagonal);
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut prev: Vec<Complex64> = vec![one];
    if n == 0 {
        return Ok(prev);
    }
    let mut cur: Vec<Complex64> = vec![-h[(0, 0)], one];
    for k in 1..n {
        let a = h[(k, k)];
        let bc = h[(k - 1, k)] * h[(k, k - 1)];
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (d, &c) in cur.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= a * c;
        }
        for (d, &c) in prev.iter().enumerate() {
            next[d] -= bc * c;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_iterator(d.len(), d.iter().map(|&x| c(x, 0.0))))
    }

    fn sorted_re(v: &[Complex64]) -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn eig_of_diagonal() {
        let d = eig(&real_diag(&[1.0, 2.0, 3.0])).unwrap();
        let r = sorted_re(&d.eigenvalues);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!((d.condition_estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_of_exchange() {
        let d = eig(&crate::models::pt_parity(2)).unwrap();
        let r = sorted_re(&d.eigenvalues);
        assert!((r[0] + 1.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_residual_on_nonnormal_input() {
        let a = ComplexMatrix::from_row_slice(
            3,
            3,
            &[
                c(1., 1.),
                c(2., 0.),
                c(0., -1.),
                c(0., 0.),
                c(-1., 0.),
                c(3., 0.),
                c(0.5, 0.),
                c(0., 0.),
                c(2., 0.),
            ],
        );
        let d = eig(&a).unwrap();
        let lam = ComplexMatrix::from_diagonal(&DVector::from_vec(d.eigenvalues.clone()));
        let r = frobenius(&(&a * &d.right_eigenvectors - &d.right_eigenvectors * lam));
        assert!(r <= tolerances::SPECTRAL * frobenius(&a));
        assert!(d.condition_estimate.is_finite());
    }

    #[test]
    fn eig_on_three_site_path() {
        let a = ComplexMatrix::from_row_slice(
            3,
            3,
            &[
                c(0., 0.),
                c(-1., 0.),
                c(0., 0.),
                c(-1., 0.),
                c(0., 0.),
                c(-1., 0.),
                c(0., 0.),
                c(-1., 0.),
                c(0., 0.),
            ],
        );
        let r = sorted_re(&eig(&a).unwrap().eigenvalues);
        let s = 2.0_f64.sqrt();
        for (got, want) in r.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_flags_jordan_block() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let d = eig(&a).unwrap();
        assert!(d.condition_estimate > tolerances::CONDITION_LIMIT);
    }

    #[test]
    fn singular_value_examples() {
        assert!((min_singular_value(&ComplexMatrix::identity(3, 3)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(min_singular_value(&real_diag(&[2.0, 0.0])).unwrap(), 0.0);
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        let s = min_singular_value(&a).unwrap();
        assert!(s > 0.6180 && s < 0.6181);
    }

    #[test]
    fn factor_examples() {
        let f = hermitian_factor(&ComplexMatrix::identity(3, 3)).unwrap();
        assert!(f.success);
        assert!(frobenius(&(f.omega.adjoint() * &f.omega - ComplexMatrix::identity(3, 3))) < 1e-14);

        assert!(!hermitian_factor(&real_diag(&[1.0, -1.0])).unwrap().success);

        let t = real_diag(&[4.0, 9.0]);
        let f = hermitian_factor(&t).unwrap();
        assert!(f.success);
        assert!(frobenius(&(f.omega.adjoint() * &f.omega - &t)) <= tolerances::RESIDUAL * frobenius(&t));
        let inv = f.omega_inverse.unwrap();
        assert!(frobenius(&(&f.omega * inv - ComplexMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn factor_rejects_nonhermitian() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(hermitian_factor(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn charpoly_two_by_two() {
        let (a, b) = (c(2.0, 1.0), c(-0.5, 3.0));
        let h = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), a, b, c(0., 0.)]);
        let p = charpoly_tridiagonal(&h).unwrap();
        assert_eq!(p, vec![-(a * b), c(0., 0.), c(1., 0.)]);
    }

    #[test]
    fn charpoly_rejects_full_matrix() {
        let h = ComplexMatrix::from_element(3, 3, c(1.0, 0.0));
        assert_eq!(charpoly_tridiagonal(&h), Err(Error::NotTridiagonal));
    }
}
