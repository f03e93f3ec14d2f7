//! Explicitly correlated Gaussian basis functions with shifts, their pairwise
//! product algebra, and the Gaussian moment integrals every matrix-element
//! kernel is built from.
//!
//! A basis function over n electrons is
//!
//! φ(r) = exp[−(r−s)ᵀ Ā (r−s)],   Ā = A ⊗ I₃,
//!
//! with A an n×n SPD exponent matrix and s a 3n shift vector (s = 0 gives a
//! plain correlated Gaussian). The product of two such functions is again a
//! Gaussian, exp(γ_kl)·exp[−(r−m)ᵀĀ_kl(r−m)] up to normalization, with
//!
//! A_kl = A_k + A_l,   e_kl = Ā_k s_k + Ā_l s_l,
//! η_kl = s_kᵀĀ_k s_k + s_lᵀĀ_l s_l,   γ_kl = e_klᵀĀ_kl⁻¹ e_kl − η_kl,
//!
//! so every integral of interest is a Gaussian expectation under the measure
//! N(m, C ⊗ I₃), m = Ā_kl⁻¹e_kl, C = A_kl⁻¹/2, scaled by the overlap
//! S_kl = exp(γ_kl)·π^{3n/2}·|A_kl|^{−3/2}. [`PairProduct`] caches the
//! factorization of A_kl; the moment helpers and the Laplacian polynomial
//! representation feed the kinetic, potential, and squared-Hamiltonian
//! kernels downstream.

mod basis;
mod laplacian;
mod moments;
mod pair;
mod symmetry;

pub use basis::{
    read_basis_file, write_basis_file, BasisFunctionRecord, BasisSetFile, EcgBasisFunction,
    BASIS_FILE_VERSION,
};
pub use laplacian::{laplacian_polynomial, LaplacianPolynomial, LaplacianTarget};
pub use moments::{quadratic_moment, quartic_moment};
pub use pair::{pair_product, GaussianMoments, PairProduct};
pub use symmetry::symmetrized_element;

use matkit::MatError;
use thiserror::Error;

/// Errors raised by basis construction, products, and symmetrization.
#[derive(Debug, Error)]
pub enum EcgError {
    #[error(transparent)]
    Mat(#[from] MatError),
    /// Bra and ket describe different numbers of electrons.
    #[error("electron count mismatch: {left} vs {right}")]
    ElectronCountMismatch { left: usize, right: usize },
    /// Shift vector has the wrong length or non-finite entries.
    #[error("shift vector must hold 3n = {expected} finite reals (got length {got})")]
    InvalidShift { got: usize, expected: usize },
    /// Permutation is not a bijection of 0..n.
    #[error("invalid permutation of {n} electrons: {reason}")]
    InvalidPermutation { n: usize, reason: &'static str },
    /// Spatial symmetrization is defined here for two electrons only.
    #[error("spatial symmetrization supports exactly two electrons (got {n})")]
    UnsupportedElectronCount { n: usize },
    /// Basis-set file malformed or inconsistent.
    #[error("basis file error: {reason}")]
    BasisFile { reason: String },
    #[error("basis file I/O: {0}")]
    Io(#[from] std::io::Error),
}
