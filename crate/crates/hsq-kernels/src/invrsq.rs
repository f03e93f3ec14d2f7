use ecg_core::PairProduct;
use matkit::PairCoupling;
use quad_engine::dawson;

use crate::HsqError;

/// Scalars of the ⟨1/r_ij²⟩ closed form: the direction weight
/// a = Tr(J_ij·A_kl⁻¹) and the mean offset β = e_klᵀĀ_kl⁻¹J̄_ijĀ_kl⁻¹e_kl.
#[derive(Debug, Clone, Copy)]
pub struct InvRsqCoefficients {
    pub a: f64,
    pub beta: f64,
}

/// Coefficients (a, β) of the squared-inverse-distance kernel for the
/// electron pair (i, j). β is a sum of squares, so it is nonnegative exactly.
pub fn invrsq_coeffs(pp: &PairProduct, i: usize, j: usize) -> Result<InvRsqCoefficients, HsqError> {
    let coupling = PairCoupling::inter(i, j, pp.n_electrons())?;
    let a = coupling.trace_with(pp.inv_a_kl())?;
    if a <= 0.0 {
        return Err(HsqError::DomainError {
            reason: format!("direction weight a = {a:.3e} must be positive"),
        });
    }
    let beta = coupling.quadratic_block(pp.mean(), pp.mean());
    Ok(InvRsqCoefficients { a, beta })
}

/// ⟨1/u²⟩/S_kl for a Gaussian pair direction with weight a and offset β:
/// √π·e^{−x²}·erfi(x)/√(aβ) with x = √(β/a), evaluated as 2·D(x)/(a·x)
/// through the Dawson function so large x cannot overflow. Below x = 1e-5
/// the Maclaurin form (2/a)(1 − 2x²/3 + 4x⁴/15) avoids the 0/0 ratio.
pub(crate) fn inverse_square_factor(a: f64, beta: f64) -> f64 {
    let x = (beta / a).sqrt();
    if x < 1e-5 {
        let z = x * x;
        2.0 / a * (1.0 - 2.0 / 3.0 * z + 4.0 / 15.0 * z * z)
    } else {
        2.0 * dawson(x) / (a * x)
    }
}

/// ⟨φ_k|1/|r_i − r_j|²|φ_l⟩ = S_kl·√π·exp(−β/a)·erfi(√(β/a))/√(aβ).
///
/// One auxiliary variable opens 1/u² = ∫₀^∞ e^{−t·u²} dt; the Gaussian
/// integral over r then leaves a 1-D integral that closes into the imaginary
/// error function, evaluated here in its stable Dawson form.
pub fn inv_r_squared(pp: &PairProduct, i: usize, j: usize) -> Result<f64, HsqError> {
    let coeffs = invrsq_coeffs(pp, i, j)?;
    Ok(pp.overlap() * inverse_square_factor(coeffs.a, coeffs.beta))
}
