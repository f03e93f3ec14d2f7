//! One-dimensional adaptive quadrature and the error-function family.
//!
//! The integral kernels upstream reduce every matrix element that lacks a
//! closed form to a single smooth 1-D integral on either a finite interval or
//! a half line, sometimes with an inverse-square-root endpoint singularity.
//! This crate evaluates those integrals with an adaptive 15-point
//! Gauss–Kronrod rule (bisection of the worst segment, QUADPACK-style error
//! rescaling) after an optional variable change:
//!
//! - `sqrt-endpoint`: x = a + y² absorbs an x^{−1/2} singularity at the lower
//!   endpoint,
//! - `rational-infinite`: u = a + w/(1−w) maps [a, ∞) onto [0, 1).
//!
//! It also provides erf, erfi, the Dawson function, and the lower incomplete
//! gamma function γ(1/2, x), which the closed-form kernels need directly.

mod adaptive;
mod kronrod;
mod special;

pub use adaptive::{integrate, QuadratureResult, QuadratureSpec, Transform};
pub use special::{dawson, erf, erfi, lower_gamma_half};

use thiserror::Error;

/// Errors raised by the adaptive integrator.
#[derive(Debug, Clone, Error)]
pub enum QuadError {
    /// Tolerance not reached within the subdivision budget; carries the best
    /// estimate obtained.
    #[error(
        "quadrature failed to converge: best estimate {value:.9e} ± {error_estimate:.3e} \
         after {subdivisions_used} subdivisions"
    )]
    QuadratureFailure {
        value: f64,
        error_estimate: f64,
        subdivisions_used: usize,
    },
    /// The integrand produced NaN or ±∞ somewhere in the reported segment.
    #[error("integrand is not finite inside [{segment_start:.6e}, {segment_end:.6e}]")]
    NonFiniteIntegrand { segment_start: f64, segment_end: f64 },
    /// Specification or interval arguments are unusable.
    #[error("invalid quadrature request: {reason}")]
    InvalidRequest { reason: &'static str },
}
