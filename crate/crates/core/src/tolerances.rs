//! Accuracy constants shared by the library, its tests and the CLI manifest.

/// Relative accuracy target for spectral quantities (eigenvalues, singular values).
pub const SPECTRAL: f64 = 1e-8;

/// Relative accuracy target for residual checks (Dieudonné residual, factor reconstruction).
pub const RESIDUAL: f64 = 1e-10;

/// Positivity threshold relative to the 2-norm of the matrix under test.
pub const POSITIVITY: f64 = 1e-12;

/// Exactness bound for closed-form pseudometrics (only rounding enters).
pub const CLOSED_FORM: f64 = 1e-12;

/// Eigenvalue separation below which a spectrum counts as degenerate.
pub const SIMPLE_GAP: f64 = 1e-6;

/// Parameter-space tolerance for exceptional-point bisection.
pub const EP_BISECTION: f64 = 1e-4;

/// Eigenvector condition numbers above this are treated as non-diagonalizable.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative slack admitted in the two-sided resolvent estimate.
pub const ENCLOSURE_SLACK: f64 = 1e-6;

/// Iteration cap handed to the iterative decompositions (per matrix dimension).
pub const MAX_ITER_PER_DIM: usize = 1_000;
