//! Generalized eigenproblem Hc = ESc over a nonorthogonal Gaussian basis,
//! energy variance, the Weinstein, Temple, and Stevenson lower bounds, and
//! stochastic optimization of the nonlinear basis parameters.

mod bounds;
mod eigen;
mod matrices;
mod optimize;

pub use bounds::{
    bounds_report, rayleigh_and_variance, stevenson, temple, weinstein, BetaSource, BoundsReport,
};
pub use eigen::{solve_generalized, GeneralizedEigen};
pub use matrices::{
    build_matrices, build_overlap_hamiltonian, exchange_swapped, ExchangeSymmetry,
    SpectralMatrices,
};
pub use optimize::{stochastic_optimize, OptimizeConfig, OptimizeOutcome};

use thiserror::Error;

/// Errors from spectral assembly, the eigensolver, and the bound formulas.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Mat(#[from] matkit::MatError),
    #[error(transparent)]
    Ecg(#[from] ecg_core::EcgError),
    #[error(transparent)]
    Kernel(#[from] coulomb_kernels::KernelError),
    #[error(transparent)]
    Hsq(#[from] hsq_kernels::HsqError),
    #[error("overlap matrix is not positive definite at row {row}: the basis is linearly dependent there")]
    OverlapNotPositiveDefinite { row: usize },
    #[error("matrix dimensions disagree: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis is empty")]
    EmptyBasis,
    #[error("coefficient vector is zero")]
    ZeroVector,
    #[error("variance {value:.6e} is negative beyond the clamping tolerance; the H-squared matrix is inconsistent with H")]
    NegativeVariance { value: f64 },
    #[error("Temple's bound needs beta > E (beta = {beta}, E = {energy})")]
    BetaNotAboveE { beta: f64, energy: f64 },
    #[error("exchange symmetrization applies to two-electron bases only (got {n})")]
    ExchangeUnsupported { n: usize },
    #[error("eigensolver failed to converge")]
    EigenFailure,
}
