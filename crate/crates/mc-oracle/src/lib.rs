//! Brute-force oracles for differential testing of the analytic kernels.
//!
//! Every matrix element in this workspace is an integral of some operator
//! against the Gaussian weight φ_kφ_l. That weight is exactly
//! S_kl·N(m, C⊗I₃), so two independent evaluation routes exist that share no
//! code with the closed forms:
//!
//! - [`mc_expectation`]: importance-sampled Monte Carlo, drawing r from the
//!   product Gaussian and averaging the bare operator; works for any operator
//!   with finite variance under the weight.
//! - [`radial_expectation`]: for operators depending only on one pair
//!   distance |u|, the exact 3-D marginal of u is an isotropic Gaussian, so
//!   the expectation collapses to a 1-D radial integral done to quadrature
//!   tolerance. This is the mandatory route for 1/|u|², whose plain MC
//!   estimator has infinite variance in three dimensions.
//!
//! [`marginal_pair_density`] exposes the exact joint Gaussian of two pair
//! vectors for covariance-level checks of the same reductions.

mod marginal;
mod mc;

pub use marginal::{marginal_pair_density, radial_expectation, PairMarginal};
pub use mc::mc_expectation;

use ecg_core::EcgError;
use matkit::MatError;
use quad_engine::QuadError;
use thiserror::Error;

/// How an [`OracleEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Mc,
    Radial,
    MarginalPair,
}

/// Oracle value with its uncertainty: a statistical standard error for MC,
/// a quadrature error bound for the radial route.
#[derive(Debug, Clone, Copy)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub method: OracleMethod,
}

/// Errors raised by the oracle routes.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ecg(#[from] EcgError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    /// The integrand returned NaN or ±∞ at the given draw.
    #[error("integrand produced a non-finite value at sample {index}")]
    NonFiniteSample { index: usize },
    /// Joint covariance of the requested pair vectors is singular.
    #[error("marginal covariance of the requested pair vectors is singular")]
    DegenerateMarginal,
    /// Budget or coupling arguments unusable.
    #[error("invalid oracle request: {reason}")]
    InvalidRequest { reason: &'static str },
}
