mod common;

use common::*;
use ptssh::closed_form::{chessboard_pseudometric, general_pseudometric, robin_pseudometric};
use ptssh::dieudonne::*;
use ptssh::models::{pt_parity, ModelKind};
use ptssh::numerics::{self, hermitian_factor};
use ptssh::{tolerances, ComplexMatrix};

#[test]
fn residual_examples() {
    let h = hamiltonian(ModelKind::Ssh, 4, 0.3, 0.0, 0.0);
    assert_eq!(residual(&h, &ComplexMatrix::identity(4, 4)).unwrap(), 0.0);
    for kind in [ModelKind::Ssh, ModelKind::Dssh, ModelKind::Robin] {
        let h = hamiltonian(kind, 6, if kind == ModelKind::Robin { 0.0 } else { 0.45 }, -0.3, 1.1);
        assert!(residual(&h, &pt_parity(6)).unwrap() < 1e-15);
    }
    let h = hamiltonian(ModelKind::Ssh, 4, 0.3, 0.0, 0.2);
    let r = residual(&h, &ComplexMatrix::identity(4, 4)).unwrap();
    assert!((r - oracle_residual(&h, &ComplexMatrix::identity(4, 4))).abs() < 1e-16);
    assert!(r > 0.0);
}

#[test]
fn kernel_dimension_on_real_simple_spectra() {
    let mut r = rng(2024);
    for kind in [ModelKind::Ssh, ModelKind::Dssh, ModelKind::Robin] {
        for n in [2usize, 4, 6, 8] {
            for _ in 0..50 {
                let (l, rho, w) = draw_real_point(&mut r, kind, n, 0.9, 1.2);
                let h = hamiltonian(kind, n, l, rho, w);
                let set = pseudometric_kernel(&h, None).unwrap();
                assert_eq!(set.len(), n, "{kind} n={n} at ({l}, {rho}, {w})");
                for p in &set.matrices {
                    assert!(oracle_residual(&h, p) <= 1e-8);
                    assert_eq!(p, &p.adjoint());
                }
                assert!(set.gram_condition < 1.0 + 1e-8);
            }
        }
    }
}

#[test]
fn kernel_examples() {
    let h = hamiltonian(ModelKind::Ssh, 4, 0.0, 0.0, 0.0);
    let set = pseudometric_kernel(&h, None).unwrap();
    assert_eq!(set.len(), 4);
    assert!(projection_defect(&set.matrices, &[ComplexMatrix::identity(4, 4)]).unwrap() < 1e-8);

    let h = hamiltonian(ModelKind::Dssh, 4, 0.5, 0.0, 0.0);
    let set = pseudometric_kernel(&h, None).unwrap();
    assert_eq!(set.len(), 4);
    let closed: Vec<_> = (1..=4)
        .map(|k| chessboard_pseudometric(ModelKind::Dssh, 4, 0.5, k).unwrap())
        .collect();
    for p in &closed {
        let c = express_in_basis(&set.matrices, p).unwrap();
        let mut back = ComplexMatrix::zeros(4, 4);
        for (ci, m) in c.iter().zip(&set.matrices) {
            back += m * z(*ci, 0.0);
        }
        assert!(max_entry_diff(&back, p) < 1e-8);
    }

    let h = hamiltonian(ModelKind::Robin, 4, 0.0, 1.0, 0.3);
    assert!(real_simple(&h));
    let set = pseudometric_kernel(&h, None).unwrap();
    assert_eq!(set.len(), 4);
    assert!(set.residuals.iter().all(|&r| r < 1e-10));
}

#[test]
fn rank_ambiguity_is_reported() {
    let h = hamiltonian(ModelKind::Ssh, 4, 0.2, 0.3, 0.1);
    let op = dieudonne_operator(&h).unwrap();
    let s = nalgebra::SVD::new(op, false, false).singular_values;
    let mut s: Vec<f64> = s.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    // a tolerance sitting between two nonzero singular values that are close
    // to each other cannot separate them cleanly
    let (a, b) = s
        .windows(2)
        .map(|w| (w[0], w[1]))
        .rfind(|(a, b)| *b > 1e-8 && a / b < 10.0)
        .unwrap();
    let tol = (a * b).sqrt();
    assert!(matches!(
        pseudometric_kernel(&h, Some(tol)),
        Err(ptssh::Error::RankAmbiguous { .. })
    ));
    assert!(pseudometric_kernel(&h, Some(-1.0)).is_err());
}

#[test]
fn eigvec_metric_examples() {
    let h = hamiltonian(ModelKind::Ssh, 6, 0.3, 0.0, 0.0);
    let theta = eigvec_metric(&h, &[1.0; 6]).unwrap();
    assert!(max_entry_diff(&theta, &ComplexMatrix::identity(6, 6)) < 1e-10);

    let h = hamiltonian(ModelKind::Robin, 4, 0.0, 1.0, 0.3);
    let theta = eigvec_metric(&h, &[1.0; 4]).unwrap();
    assert!(oracle_residual(&h, &theta) < 1e-8);
    assert!(hermitian_factor(&theta).unwrap().success);

    let theta = eigvec_metric(&h, &[1.0, -1.0, 1.0, -1.0]).unwrap();
    assert_eq!(theta, theta.adjoint());
    assert!(!hermitian_factor(&theta).unwrap().success);

    assert!(eigvec_metric(&h, &[1.0; 3]).is_err());
}

#[test]
fn eigvec_metrics_lie_in_kernel() {
    let mut r = rng(7);
    for kind in [ModelKind::Ssh, ModelKind::Dssh, ModelKind::Robin] {
        for n in [2usize, 4, 6, 8] {
            for _ in 0..5 {
                let (l, rho, w) = draw_real_point(&mut r, kind, n, 0.8, 0.8);
                let h = hamiltonian(kind, n, l, rho, w);
                let set = pseudometric_kernel(&h, None).unwrap();
                let kappas: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
                let theta = eigvec_metric(&h, &kappas).unwrap();
                assert!(oracle_residual(&h, &theta) <= 1e-8);
                assert!(projection_defect(&set.matrices, &[theta]).unwrap() < 1e-8);
            }
        }
    }
}

#[test]
fn band_solve_at_full_index_is_parity() {
    let mut r = rng(99);
    for kind in [ModelKind::Ssh, ModelKind::Dssh, ModelKind::Robin] {
        for n in [2usize, 4, 6, 8] {
            let (l, rho, w) = draw_real_point(&mut r, kind, n, 0.8, 0.8);
            let h = hamiltonian(kind, n, l, rho, w);
            let res = band_restricted_solve(&h, n, false).unwrap();
            assert_eq!(res.status, BandStatus::BasisFound);
            assert_eq!(res.matrices.len(), 1);
            assert!(mutual_projection_defect(&res.matrices, &[pt_parity(n)]).unwrap() < 1e-10);
        }
    }
}

#[test]
fn band_solve_examples() {
    let h = hamiltonian(ModelKind::Ssh, 6, 0.4, 0.2, 0.3);
    let res = band_restricted_solve(&h, 4, false).unwrap();
    assert_eq!(res.status, BandStatus::BasisFound);
    let closed = general_pseudometric(ModelKind::Ssh, 6, 0.4, 0.2, 0.3, 4).unwrap();
    assert_eq!(res.matrices.len(), 1);
    assert!(mutual_projection_defect(&res.matrices, &[closed]).unwrap() < 1e-8);
    for p in &res.matrices {
        assert!(oracle_residual(&h, p) <= 1e-8);
    }

    let res = band_restricted_solve(&h, 3, false).unwrap();
    assert_eq!(res.status, BandStatus::CutoffViolation);
    assert!(res.violation_norm > tolerances::SPECTRAL * res.scale);
    assert!(res.matrices.is_empty());

    let h = hamiltonian(ModelKind::Robin, 6, 0.0, 0.5, 0.3);
    for k in 1..=6 {
        let res = band_restricted_solve(&h, k, false).unwrap();
        assert_eq!(res.status, BandStatus::BasisFound, "k={k}");
        let w = robin_pseudometric(6, 0.5, 0.3, k).unwrap();
        assert!(mutual_projection_defect(&res.matrices, &[w]).unwrap() < 1e-8);
    }

    assert!(band_restricted_solve(&h, 0, false).is_err());
    assert!(band_restricted_solve(&h, 7, false).is_err());
}

#[test]
fn band_solve_chessboard_at_zero_coupling() {
    for kind in [ModelKind::Ssh, ModelKind::Dssh] {
        let h = hamiltonian(kind, 6, 0.3, 0.0, 0.0);
        for k in 1..=6 {
            let res = band_restricted_solve(&h, k, true).unwrap();
            assert_eq!(res.status, BandStatus::BasisFound);
            let p = chessboard_pseudometric(kind, 6, 0.3, k).unwrap();
            assert!(mutual_projection_defect(&res.matrices, &[p]).unwrap() < 1e-8);
        }
    }
}

#[test]
fn ssh_cutoff_below_three_outer_families() {
    let mut r = rng(31);
    for n in [6usize, 8] {
        for _ in 0..10 {
            let (l, rho, w) = loop {
                let p = draw_real_point(&mut r, ModelKind::Ssh, n, 0.8, 0.8);
                if p.0.abs() > 0.05 && p.2.abs() > 0.05 {
                    break p;
                }
            };
            let h = hamiltonian(ModelKind::Ssh, n, l, rho, w);
            for k in 1..=n {
                let res = band_restricted_solve(&h, k, false).unwrap();
                let want = if k + 3 <= n {
                    BandStatus::CutoffViolation
                } else {
                    BandStatus::BasisFound
                };
                assert_eq!(res.status, want, "n={n} k={k} at ({l}, {rho}, {w})");
            }
        }
    }
}

/// The dual chain is a diagonal similarity transform of a symmetric chain,
/// so the product ansatz never runs into a cutoff there.
#[test]
fn dssh_is_diagonally_similar_to_a_symmetric_chain() {
    let (n, l, rho, w) = (6usize, 0.4, 0.2, 0.3);
    let h = hamiltonian(ModelKind::Dssh, n, l, rho, w);
    let ratio = ((1.0 + l) / (1.0 - l)).sqrt();
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|i| z(ratio.powi(-(i as i32)), 0.0)),
    ));
    let dinv = d.clone().try_inverse().unwrap();
    let s = naive_mul(&naive_mul(&dinv, &h), &d);
    assert!(max_entry_diff(&s, &s.transpose()) < 1e-14);
    for k in 1..=n {
        let res = band_restricted_solve(&h, k, false).unwrap();
        assert_eq!(res.status, BandStatus::BasisFound, "k={k}");
    }
}

#[test]
fn unconstrained_band_kernel_never_empties() {
    let h = hamiltonian(ModelKind::Ssh, 6, 0.4, 0.2, 0.3);
    for k in 1..=6 {
        let res = band_restricted_solve(&h, k, false).unwrap();
        assert!(res.unconstrained_dimension >= 1);
    }
}

#[test]
fn eigen_helpers_agree() {
    let h = hamiltonian(ModelKind::Robin, 5, 0.0, 0.7, 0.2);
    let a = numerics::eigenvalues(&h).unwrap();
    let b = numerics::eig(&h).unwrap().eigenvalues;
    assert!(multiset_distance(&a, &b) < 1e-12);
}
