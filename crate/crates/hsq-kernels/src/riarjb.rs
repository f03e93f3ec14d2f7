use coulomb_kernels::CoulombChannel;
use ecg_core::PairProduct;
use matkit::{block_solve, PairCoupling};
use quad_engine::QuadratureSpec;

use crate::invrsq::inverse_square_factor;
use crate::rijrpa::{sigma_coeffs, sigma_integral};
use crate::HsqError;

/// ⟨φ_k|1/(|r_i − a|·|r_j − b|)|φ_l⟩ for two nuclear attraction directions.
///
/// Three regimes, all sharing the machinery of the mixed
/// electron–electron/nuclear product:
///
/// - a = b and i = j: the factors coincide, ⟨1/|r_i − a|²⟩, which closes
///   into the Dawson form of [`inv_r_squared`](crate::inv_r_squared) with
///   the single-particle coupling J_ii and the frame shifted onto a.
/// - a = b, i ≠ j: the frame shifted onto the shared nucleus makes both
///   directions translation-free, so the reduction runs with two
///   single-particle couplings (J_jj closed in erf form, J_ii opened last).
/// - a ≠ b: the frame is shifted onto b; the auxiliary Gaussian for
///   1/|r_i − (a−b)| then carries a u-dependent linear term, which the
///   Sherman–Morrison collapse absorbs into the same σ(u) polynomials with
///   the offset entering only through h = (a−b) − m^{(i)}.
///
/// The distinct-nuclei case goes beyond the closed-form pair reductions and
/// is validated against the Monte Carlo oracle.
pub fn inv_ria_rjb_general(
    pp: &PairProduct,
    i: usize,
    a_pos: [f64; 3],
    j: usize,
    b_pos: [f64; 3],
    q: &QuadratureSpec,
) -> Result<f64, HsqError> {
    let n = pp.n_electrons();
    let coincident = a_pos == b_pos;
    if coincident && i == j {
        let coupling = PairCoupling::single(i, n)?;
        let a = coupling.trace_with(pp.inv_a_kl())?;
        if a <= 0.0 {
            return Err(HsqError::DomainError {
                reason: format!("direction weight a = {a:.3e} must be positive"),
            });
        }
        let channel = CoulombChannel::to_nucleus(pp, i, a_pos)?;
        let m_a = block_solve(pp.chol_a_kl(), channel.shifted_e());
        let beta = coupling.quadratic_block(&m_a, &m_a);
        return Ok(pp.overlap() * inverse_square_factor(a, beta));
    }
    let closed = PairCoupling::single(j, n)?;
    let sc = sigma_coeffs(pp, &closed, i, b_pos, a_pos)?;
    sigma_integral(pp.overlap(), &sc, q)
}
