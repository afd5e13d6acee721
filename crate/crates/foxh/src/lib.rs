//! Fox H-function machinery and the fundamental solution of space-time
//! fractional diffusion.
//!
//! The library evaluates the Mellin–Barnes representation of Fox H-functions
//! (residue series, Bromwich-contour quadrature, asymptotic tails) and builds
//! on it the fundamental solution `p_{σ,γ}(t, x)` of
//!
//! ```text
//! ∂_t^α u = −(−Δ)^β u      (0 < α ≤ 1, β > 0)
//! ```
//!
//! together with its Riesz-derivative variants, Mittag-Leffler functions,
//! Fourier-side oracles for validation, and executable asymptotic envelopes.

pub mod asymptotics;
pub mod gamma;
pub mod hfun;
pub mod kernel;
pub mod mittag;
pub mod oracle;
pub mod selfcheck;

/// Shared tolerance for "is this parameter an integer" classification.
pub const INT_TOL: f64 = 1e-9;

/// True when `x` is within [`INT_TOL`] of a non-negative integer.
pub fn is_nonneg_int(x: f64) -> bool {
    x > -INT_TOL && (x - x.round()).abs() <= INT_TOL
}

/// True when `x` is within [`INT_TOL`] of a positive integer.
pub fn is_pos_int(x: f64) -> bool {
    x > 0.5 && (x - x.round()).abs() <= INT_TOL
}
