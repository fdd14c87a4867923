//! Numeric tolerances shared across the crate.
//!
//! Structural identities (norms, orthogonality, projector algebra, exact
//! branch probabilities) hold to near machine precision. Accumulated
//! quantities (entropies, eigenvalue residuals, user-supplied parameters)
//! get a looser bound. PSD checks absorb eigensolver roundoff.

/// Tolerance for structural identities.
pub const STRUCTURAL: f64 = 1e-12;

/// Tolerance for accumulated / user-facing quantities.
pub const ACCUMULATED: f64 = 1e-9;

/// Smallest admissible eigenvalue for a positive-semidefinite check.
pub const PSD_FLOOR: f64 = -1e-10;

/// Probabilities at or below this are treated as exact zeros.
pub const PROB_FLOOR: f64 = 1e-14;
