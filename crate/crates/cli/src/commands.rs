use std::f64::consts::TAU;
use std::path::PathBuf;

use anyhow::bail;
use ptssh::closed_form::{available_indices, closed_form_set};
use ptssh::dieudonne::{
    eigvec_metric, mutual_projection_defect, projection_defect, pseudometric_kernel, PseudometricSet,
};
use ptssh::metric::{positivity_scan, MetricCandidate};
use ptssh::numerics::hermitian_defect;
use ptssh::spectral::{ep_boundary, pseudospectrum, sweep_theta, sweep_theta_swapped, Axis, Window};
use serde::Serialize;

use crate::args::*;
use crate::io::{emit, num, to_entries, to_json, Csv, Entries, MatrixFile};
use crate::manifest::{RunManifest, Schema};
use crate::{NumericalError, UsageError, EMIT_RESIDUAL};

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Build(a) => build(&a),
        Command::Pseudometrics(a) => pseudometrics(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Epmap(a) => epmap(&a),
        Command::Pseudospectrum(a) => pseudospectrum_cmd(&a),
        Command::Positivity(a) => positivity(&a),
    }
}

fn build(a: &BuildArgs) -> anyhow::Result<()> {
    let (_, h) = a.model.hamiltonian()?;
    let manifest = RunManifest::new("build", a)?;
    emit(a.out.out.as_deref(), &to_json(&MatrixFile::new(&h, manifest))?)
}

#[derive(Serialize)]
struct EmittedMatrix {
    /// Family index for closed forms, basis position for the oracle.
    index: usize,
    entries: Entries,
    residual: f64,
    hermitian_defect: f64,
}

#[derive(Serialize)]
struct SetReport {
    matrices: Vec<EmittedMatrix>,
    /// `null` when the Gram matrix is singular.
    gram_condition: Option<f64>,
}

#[derive(Serialize)]
struct CrossValidation {
    /// Largest distance of a closed-form member from the oracle span.
    closed_in_oracle: f64,
    /// Two-sided defect; present when both sets have n members.
    mutual: Option<f64>,
}

#[derive(Serialize)]
struct PseudometricReport {
    n: usize,
    closed: Option<SetReport>,
    oracle: Option<SetReport>,
    cross_validation: Option<CrossValidation>,
    manifest: RunManifest,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn set_report(set: &PseudometricSet, labels: &[usize]) -> SetReport {
    let matrices = set
        .matrices
        .iter()
        .zip(&set.residuals)
        .zip(labels)
        .map(|((m, &r), &index)| EmittedMatrix {
            index,
            entries: to_entries(m),
            residual: r,
            hermitian_defect: hermitian_defect(m),
        })
        .collect();
    SetReport {
        matrices,
        gram_condition: finite(set.gram_condition),
    }
}

fn pseudometrics(a: &PseudometricsArgs) -> anyhow::Result<()> {
    let (spec, h) = a.model.hamiltonian()?;
    let n = spec.n;
    let ks = a.indices(n)?;
    let closed = if a.source != Source::Oracle {
        let labels = ks.clone().unwrap_or_else(|| available_indices(&spec));
        Some((closed_form_set(&spec, Some(&labels))?, labels))
    } else {
        None
    };
    let oracle = if a.source != Source::Closed {
        Some(pseudometric_kernel(&h, None)?)
    } else {
        None
    };

    let worst = closed
        .iter()
        .map(|(s, _)| s.max_residual())
        .chain(oracle.iter().map(|s| s.max_residual()))
        .fold(0.0, f64::max);
    if worst > EMIT_RESIDUAL && !a.force {
        return Err(NumericalError(format!(
            "residual {worst:.3e} exceeds {EMIT_RESIDUAL:.0e}; rerun with --force to write anyway"
        ))
        .into());
    }

    let cross_validation = match (&closed, &oracle) {
        (Some((c, _)), Some(o)) => Some(CrossValidation {
            closed_in_oracle: projection_defect(&o.matrices, &c.matrices)?,
            mutual: if c.len() == n && o.len() == n {
                Some(mutual_projection_defect(&o.matrices, &c.matrices)?)
            } else {
                None
            },
        }),
        _ => None,
    };
    let report = PseudometricReport {
        n,
        closed: closed.as_ref().map(|(s, labels)| set_report(s, labels)),
        oracle: oracle
            .as_ref()
            .map(|s| set_report(s, &(1..=s.len()).collect::<Vec<_>>())),
        cross_validation,
        manifest: RunManifest::new("pseudometrics", a)?,
    };
    emit(a.out.out.as_deref(), &to_json(&report)?)
}

fn sweep(a: &SweepArgs) -> anyhow::Result<()> {
    if a.model.chain.lambda.is_some() || a.model.chain.theta.is_some() {
        return Err(UsageError("sweep varies theta itself; drop --lambda/--theta".into()).into());
    }
    let (rho, omega) = a.model.gamma.gamma()?;
    let axis = Axis::new("theta", 0.0, TAU, a.theta_steps)?;
    let grid = if a.swapped {
        sweep_theta_swapped(a.model.chain.n, rho, omega, &axis)?
    } else {
        sweep_theta(a.model.chain.model, a.model.chain.n, rho, omega, &axis)?
    };
    let schema = Schema::new("sweep", &["theta", "index", "eig_re", "eig_im"]);
    let mut csv = Csv::new(&RunManifest::new("sweep", a)?.with_schema(schema.clone()), &schema)?;
    for p in &grid.points {
        for (i, e) in p.eigenvalues.iter().enumerate() {
            csv.row(&[num(p.params[0]), i.to_string(), num(e.re), num(e.im)]);
        }
    }
    emit(a.out.out.as_deref(), &csv.finish())
}

fn epmap(a: &EpmapArgs) -> anyhow::Result<()> {
    let rho = Axis::new("rho", a.rho.min, a.rho.max, a.rho.count)?;
    let omega = Axis::new("omega", a.omega.min, a.omega.max, a.omega.count)?;
    let map = ep_boundary(a.chain.model, a.chain.n, a.chain.lambda(), &rho, &omega)?;

    let schema = Schema::new("epmap", &["rho", "omega", "all_real", "cond_estimate"]);
    let mut csv = Csv::new(&RunManifest::new("epmap", a)?.with_schema(schema.clone()), &schema)?;
    for c in &map.cells {
        csv.row(&[
            num(c.rho),
            num(c.omega),
            c.all_real.to_string(),
            num(c.condition_estimate),
        ]);
    }
    emit(a.out.out.as_deref(), &csv.finish())?;

    let boundary_path = a.boundary_out.clone().or_else(|| {
        a.out.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".boundary.csv");
            PathBuf::from(s)
        })
    });
    match boundary_path {
        Some(path) => {
            let schema = Schema::new("epmap-boundary", &["rho", "omega", "alpha", "beta"]);
            let mut csv = Csv::new(&RunManifest::new("epmap", a)?.with_schema(schema.clone()), &schema)?;
            for b in &map.boundary {
                let (al, be) = b.robin.map(|r| (num(r.alpha), num(r.beta))).unwrap_or_default();
                csv.row(&[num(b.rho), num(b.omega), al, be]);
            }
            emit(Some(&path), &csv.finish())
        }
        None => {
            eprintln!(
                "{} boundary points found; pass --boundary-out to keep them",
                map.boundary.len()
            );
            Ok(())
        }
    }
}

fn pseudospectrum_cmd(a: &PseudospectrumArgs) -> anyhow::Result<()> {
    if a.res == 0 {
        return Err(UsageError("--res must be positive".into()).into());
    }
    let (_, h) = a.model.hamiltonian()?;
    let kappa = if a.enclosure {
        let theta = eigvec_metric(&h, &vec![1.0; h.nrows()])?;
        let c = MetricCandidate::from_theta(theta, Vec::new())?;
        if !c.positive {
            bail!(NumericalError("eigenvector metric is not positive definite".into()));
        }
        Some(c.kappa)
    } else {
        None
    };
    let w = &a.window;
    let window = Window {
        re_min: w.re_min,
        re_max: w.re_max,
        im_min: w.im_min,
        im_max: w.im_max,
        re_count: a.res,
        im_count: a.res,
    };
    let grid = pseudospectrum(&h, &window, kappa)?;
    let schema = Schema::new(
        "pseudospectrum",
        &[
            "lam_re",
            "lam_im",
            "resnorm",
            "lower_bound",
            "upper_bound",
            "enclosure_ok",
        ],
    );
    let mut csv = Csv::new(
        &RunManifest::new("pseudospectrum", a)?.with_schema(schema.clone()),
        &schema,
    )?;
    for p in &grid.points {
        csv.row(&[
            num(p.lambda.re),
            num(p.lambda.im),
            num(p.resnorm),
            num(p.lower_bound),
            p.upper_bound.map(num).unwrap_or_default(),
            p.enclosure_ok.map(|b| b.to_string()).unwrap_or_default(),
        ]);
    }
    emit(a.out.out.as_deref(), &csv.finish())
}

fn positivity(a: &PositivityArgs) -> anyhow::Result<()> {
    let (spec, h) = a.model.hamiltonian()?;
    let set = match a.source {
        SetChoice::Closed => closed_form_set(&spec, None)?,
        SetChoice::Oracle => pseudometric_kernel(&h, None)?,
    };
    let ranges = vec![(a.eps.min, a.eps.max); set.len()];
    let points = positivity_scan(&set, &ranges, a.eps.count)?;

    let mut columns: Vec<String> = (1..=set.len()).map(|i| format!("eps_{i}")).collect();
    columns.push("positive".into());
    columns.push("min_eigenvalue".into());
    let refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let schema = Schema::new("positivity", &refs);
    let mut csv = Csv::new(&RunManifest::new("positivity", a)?.with_schema(schema.clone()), &schema)?;
    for p in &points {
        let mut row: Vec<String> = p.epsilons.iter().map(|&e| num(e)).collect();
        row.push(p.positive.to_string());
        row.push(num(p.min_eigenvalue));
        csv.row(&row);
    }
    emit(a.out.out.as_deref(), &csv.finish())
}
