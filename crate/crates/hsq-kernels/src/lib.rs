//! Matrix elements of the squared electronic Hamiltonian over explicitly
//! correlated Gaussians.
//!
//! Squaring Ĥ = T̂ + V̂ produces operator products that plain Hamiltonian
//! kernels never see: the squared inverse distance ⟨1/r_ij²⟩, the mixed
//! Coulomb product ⟨1/(r_ij·r_pa)⟩ and its two-nucleus relative
//! ⟨1/(r_ia·r_jb)⟩, and the biharmonic cross term ⟨∇_i²φ_k|∇_j²φ_l⟩. This
//! crate evaluates each of them over a [`PairProduct`](ecg_core::PairProduct)
//! and assembles the full (H²)_kl element for two-electron systems.
//!
//! Every kernel reduces the 3n-dimensional integral to scalars:
//!
//! - ⟨1/r_ij²⟩ closes into the Dawson function ([`inv_r_squared`]),
//! - ⟨1/(r_ij·r_pa)⟩ with zero shifts closes into an arcsin
//!   ([`inv_rij_rpa_zero_shift`]); with shifts one auxiliary integral
//!   survives as an adaptive 1-D quadrature ([`inv_rij_rpa_general`],
//!   [`inv_ria_rjb_general`]),
//! - ⟨∇_i²φ_k|∇_j²φ_l⟩ closes into Gaussian quartic moments
//!   ([`del4_cross`]).

mod assemble;
mod del4;
mod invrsq;
mod riarjb;
mod rijrpa;

pub use assemble::{assemble_h2_element, H2Element};
pub use del4::del4_cross;
pub use invrsq::{invrsq_coeffs, inv_r_squared, InvRsqCoefficients};
pub use riarjb::inv_ria_rjb_general;
pub use rijrpa::{inv_rij_rpa_general, inv_rij_rpa_zero_shift, rijrpa_coeffs, RijRpaCoefficients};

use thiserror::Error;

/// Errors raised by the squared-Hamiltonian kernels.
#[derive(Debug, Error)]
pub enum HsqError {
    #[error(transparent)]
    Mat(#[from] matkit::MatError),
    #[error(transparent)]
    Ecg(#[from] ecg_core::EcgError),
    #[error(transparent)]
    Quad(#[from] quad_engine::QuadError),
    #[error(transparent)]
    Kernel(#[from] coulomb_kernels::KernelError),
    /// A kernel coefficient left the domain where the closed form is valid.
    #[error("kernel coefficients out of domain: {reason}")]
    DomainError { reason: String },
    /// The squared Hamiltonian is assembled for two-electron systems only.
    #[error("squared-Hamiltonian assembly supports exactly two electrons (got {n})")]
    UnsupportedElectronCount { n: usize },
}
