//! Closed-form Hamiltonian matrix elements over Gaussian pair products:
//! kinetic energy, Coulomb attraction/repulsion through a single erf-based
//! formula, and the polynomial-times-Coulomb integrals the squared-operator
//! machinery builds on.
//!
//! Every Coulomb element reduces to the pair vector u of a
//! [`CoulombChannel`]: the electron–electron distance r_i − r_j or the
//! electron–nucleus distance r_p − a. Nuclear positions enter only through
//! the shifted linear coefficients e_a, η_a; the Gaussian normalization γ_kl
//! is translation invariant, so the channel carries everything a kernel
//! needs beyond the cached [`PairProduct`].

mod channel;
mod hamiltonian;
mod kernels;
mod system;

pub use channel::CoulombChannel;
pub use hamiltonian::assemble_h_element;
pub use kernels::{coulomb_quadratic, erf_ratio, inv_r, kinetic};
pub use system::{Nucleus, SystemDefinition};

use ecg_core::EcgError;
use matkit::MatError;
use quad_engine::QuadError;
use thiserror::Error;

/// Errors raised while evaluating matrix elements.
#[derive(Debug, Error)]
pub enum KernelError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ecg(#[from] EcgError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    /// The Coulomb direction coefficient a_J = Tr(J·A_kl⁻¹) came out
    /// nonpositive; with a valid SPD pair matrix this indicates corrupted
    /// inputs rather than a representable physical state.
    #[error("degenerate Coulomb channel: a_J = {a_j}")]
    DegenerateChannel { a_j: f64 },
    /// System description violates its invariants.
    #[error("invalid system definition: {reason}")]
    InvalidSystem { reason: &'static str },
}
