//! Pseudometrics and metric operators for PT-symmetric tight-binding chains.
//!
//! Three matrix families are covered: the Su-Schrieffer-Heeger chain with a
//! complex boundary coupling `γ = ρ + iω` on the first and last site, its
//! dual variant with asymmetric hopping placement, and the discrete Robin
//! well (the SSH chain at `λ = 0`).
//!
//! The crate is organised bottom-up:
//!
//! - [`models`] builds the Hamiltonians and converts parameter charts.
//! - [`numerics`] wraps the dense complex linear algebra everything else uses.
//! - [`dieudonne`] solves `H†X = XH` by brute force and is the oracle for
//!   everything in [`closed_form`].
//! - [`closed_form`] generates complete pseudometric sets from explicit
//!   element formulas.
//! - [`metric`] assembles positive metrics, factors them and checks that the
//!   induced similarity hermitizes `H`.
//! - [`spectral`] sweeps spectra over parameters, locates exceptional points
//!   and evaluates pseudospectra.
//!
//! All matrix indices in the public formulas are 1-based, as in the element
//! tables; code stores matrices 0-based and converts at the point of use.

pub mod closed_form;
pub mod dieudonne;
pub mod error;
pub mod metric;
pub mod models;
pub mod numerics;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
pub use models::{ComplexMatrix, HamiltonianSpec, ModelKind, RobinCoordinates};
pub use num_complex::Complex64;
