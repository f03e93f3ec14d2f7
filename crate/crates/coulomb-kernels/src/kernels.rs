use ecg_core::{laplacian_polynomial, quadratic_moment, EcgBasisFunction, LaplacianTarget, PairProduct};
use matkit::{block_quadratic, block_solve, Matrix};
use quad_engine::{erf, integrate, QuadratureSpec, Transform};

use crate::{CoulombChannel, KernelError};

use std::f64::consts::PI;

/// Channel coefficients shared by the Coulomb kernels: the direction weight
/// a_J = Tr(J·A_kl⁻¹), the shifted-frame mean m_a = Ā_kl⁻¹e_a, the projected
/// vector v = Ā_kl⁻¹J̄Ā_kl⁻¹e_a and β = e_aᵀĀ_kl⁻¹J̄Ā_kl⁻¹e_a = m_aᵀJ̄m_a.
struct ChannelCoeffs {
    a_j: f64,
    beta: f64,
    v: Vec<f64>,
}

fn channel_coeffs(pp: &PairProduct, ch: &CoulombChannel) -> Result<ChannelCoeffs, KernelError> {
    let a_j = ch.coupling().trace_with(pp.inv_a_kl())?;
    if a_j <= 0.0 {
        return Err(KernelError::DegenerateChannel { a_j });
    }
    let m_a = block_solve(pp.chol_a_kl(), ch.shifted_e());
    let j_m = ch.coupling().apply_block(&m_a);
    let beta = ch.coupling().quadratic_block(&m_a, &m_a);
    let v = block_solve(pp.chol_a_kl(), &j_m);
    Ok(ChannelCoeffs { a_j, beta, v })
}

/// erf(√(δ/b))/√δ for b > 0, δ ≥ 0, with the δ/b < 1e-10 regime taken by
/// series so the δ → 0 limit 2/√(πb) is exact rather than 0/0.
pub fn erf_ratio(delta: f64, b: f64) -> f64 {
    let ratio = delta / b;
    if ratio < 1e-10 {
        (2.0 / (PI * b).sqrt()) * (1.0 - ratio / 3.0 + ratio * ratio / 10.0)
    } else {
        erf(ratio.sqrt()) / delta.sqrt()
    }
}

/// ⟨φ_k|1/|u||φ_l⟩ for the channel's pair vector u:
/// S_kl·erf(√(β/a_J))/√β, the single-auxiliary-variable Gaussian transform
/// of the Coulomb potential evaluated in closed form.
pub fn inv_r(pp: &PairProduct, ch: &CoulombChannel) -> Result<f64, KernelError> {
    let coeffs = channel_coeffs(pp, ch)?;
    Ok(pp.overlap() * erf_ratio(coeffs.beta, coeffs.a_j))
}

/// ⟨φ_k|−½Σ_i∇_i²|φ_l⟩ via the ket-side Laplacian polynomial
/// ∇²φ_l = [(r−s_l)ᵀŪ(r−s_l) + c₀]φ_l and the Gaussian quadratic moment.
pub fn kinetic(
    pp: &PairProduct,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
) -> Result<f64, KernelError> {
    if bra.n_electrons() != pp.n_electrons() || ket.n_electrons() != pp.n_electrons() {
        return Err(matkit::MatError::DimensionMismatch {
            left: pp.n_electrons(),
            right: bra.n_electrons().max(ket.n_electrons()),
        }
        .into());
    }
    let poly = laplacian_polynomial(ket, LaplacianTarget::All)?;
    let quadratic = quadratic_moment(pp, &poly.u, &poly.p)?;
    Ok(-0.5 * (quadratic + poly.c0 * pp.overlap()))
}

/// ∫ [(r−p)ᵀŪ(r−p) + c₀]·(1/|u|)·φ_kφ_l dr for the channel's pair vector u.
///
/// The Coulomb factor is opened with one auxiliary Gaussian,
/// 1/|u| = (2/√π)∫₀^∞ e^{−t²u²} dt, giving a t-dependent pair matrix
/// A_kl + t²J whose determinant, inverse and mean follow from the rank-one
/// update formulas. The substitution z = t²a_J/(1+t²a_J) maps everything to
///
/// S_kl/√(π·a_J) · ∫₀¹ z^{−1/2}·e^{−zβ/a_J}·P(z) dz,
///
/// with P(z) = (3/2)(T₀ − τT₁) + q₀ − 2τq₁ + τ²q₂ + c₀ and τ = z/a_J, where
/// T₀ = Tr(U·A_kl⁻¹), T₁ = Tr(U·A_kl⁻¹J·A_kl⁻¹), and q₀, q₁, q₂ are the Ū
/// quadratic forms of d₀ = m − p against v = Ā_kl⁻¹J̄Ā_kl⁻¹e_a. The z^{−1/2}
/// endpoint is absorbed by the square-root substitution, so the caller's
/// tolerances are kept but its transform choice is overridden.
pub fn coulomb_quadratic(
    pp: &PairProduct,
    ch: &CoulombChannel,
    u: &Matrix,
    p: &[f64],
    c0: f64,
    spec: &QuadratureSpec,
) -> Result<f64, KernelError> {
    let coeffs = channel_coeffs(pp, ch)?;
    let inv = pp.inv_a_kl();
    let t0 = matkit::trace_product(&[u, inv])?;
    let inv_u_inv = inv.mul(u)?.mul(inv)?;
    let t1 = ch.coupling().trace_with(&inv_u_inv)?;

    if p.len() != 3 * pp.n_electrons() {
        return Err(matkit::MatError::DimensionMismatch {
            left: 3 * pp.n_electrons(),
            right: p.len(),
        }
        .into());
    }
    let d0: Vec<f64> = pp.mean().iter().zip(p).map(|(m, pi)| m - pi).collect();
    let q0 = block_quadratic(u, &d0, &d0);
    let q1 = block_quadratic(u, &d0, &coeffs.v);
    let q2 = block_quadratic(u, &coeffs.v, &coeffs.v);

    let a_j = coeffs.a_j;
    let decay = coeffs.beta / a_j;
    let integrand = move |z: f64| {
        let tau = z / a_j;
        let poly = 1.5 * (t0 - tau * t1) + q0 - 2.0 * tau * q1 + tau * tau * q2 + c0;
        z.powf(-0.5) * (-z * decay).exp() * poly
    };
    let quad_spec = QuadratureSpec {
        transform: Transform::SqrtEndpoint,
        ..*spec
    };
    let result = integrate(integrand, 0.0, 1.0, &quad_spec)?;
    Ok(pp.overlap() / (PI * a_j).sqrt() * result.value)
}
