//! Floating point tolerances used by the checks.

/// Numeric eigenvalues against exact ones.
pub const EIGENVALUE: f64 = 1e-10;
/// Eigenvalues closer than this are treated as colliding when matching eigenvectors.
pub const COLLISION: f64 = 1e-9;
/// Components below this fraction of the largest one are ignored when counting sign changes.
pub const SIGN_FLOOR: f64 = 1e-9;
/// Generic relative comparison of float results.
pub const RELATIVE: f64 = 1e-12;
/// Tail mass left outside a semi-infinite window.
pub const TAIL: f64 = 1e-14;
/// Column deficiency of a truncated matrix.
pub const COLUMN_DEFICIENCY: f64 = 1e-12;
/// Eigen-relation residual on a truncated lattice.
pub const SEMI_RESIDUAL: f64 = 1e-10;
/// Orthogonality of the two q-Meixner families.
pub const QM_ORTHOGONALITY: f64 = 1e-10;
/// Agreement of the two long forms of the second q-Meixner eigenvalue.
pub const QM_EXTRA_FORMS: f64 = 1e-9;
/// Total variation between sampled and exact distributions.
pub const SAMPLER_TV: f64 = 0.01;

/// `|a - b| <= tol` below one, relative above.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
