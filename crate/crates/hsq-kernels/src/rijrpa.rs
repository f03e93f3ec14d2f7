use std::cell::Cell;
use std::f64::consts::PI;

use coulomb_kernels::{erf_ratio, CoulombChannel};
use ecg_core::PairProduct;
use matkit::{block_solve, dot, PairCoupling, SpdMatrix};
use quad_engine::{integrate, QuadratureSpec, Transform};

use crate::HsqError;

/// Past x = 200 the e^{−x} weight is below 1e-87, invisible next to the
/// O(1) mass near the origin, so the finite integration window is capped
/// there to keep the square-root map's nodes where the integrand lives.
const X_CAP: f64 = 200.0;

/// Scalars of the ⟨1/(r_ij·r_pa)⟩ reduction in the frame with the nucleus at
/// the origin: trace combinations a_ij = Tr(J_ij·A_kl⁻¹),
/// a_pp = Tr(J_pp·A_kl⁻¹), c = Tr(J_ij·A_kl⁻¹J_pp·A_kl⁻¹), and contractions
/// of the shifted mean m_a = Ā_kl⁻¹e_a: γ_a = e_aᵀm_a − η_a,
/// β_a = m_aᵀJ̄_ij m_a, μ_a = m_aᵀJ̄_pp m_a,
/// ε_a = 2·m_aᵀJ̄_ij Ā_kl⁻¹J̄_pp m_a, ω_a = (Ā_kl⁻¹J̄_pp m_a)ᵀJ̄_ij Ā_kl⁻¹J̄_pp m_a.
///
/// With σ(u) = u²/(1+u²a_pp) they build the integrand pieces
/// δ(u) = β_a − ε_a·σ + ω_a·σ² and b(u) = a_ij − c·σ. Cauchy–Schwarz in the
/// A_kl⁻¹ inner product gives a_ij·a_pp ≥ c and δ(u) ≥ 0; for n = 2 and zero
/// shift, a_ij·a_pp − c = 1/det(A_kl).
#[derive(Debug, Clone, Copy)]
pub struct RijRpaCoefficients {
    pub a_ij: f64,
    pub a_pp: f64,
    pub c: f64,
    pub gamma_a: f64,
    pub beta_a: f64,
    pub mu_a: f64,
    pub epsilon_a: f64,
    pub omega_a: f64,
}

/// Coefficients of a product of two opened Coulomb factors: a closed-form
/// direction (coupling J_t, any pair vector) and a nuclear direction
/// 1/|r_i − d| opened with the outer auxiliary Gaussian, in the frame whose
/// origin makes the closed-form direction translation-free.
///
/// Opening 1/|r_i − d| with e^{−u²|r_i−d|²} adds u²J_ii to A_kl and u²·d to
/// the linear term. Sherman–Morrison in σ(u) = u²/(1+u²·a_u) collapses every
/// u-dependent quantity to a polynomial in σ:
///
/// - |A_kl + u²J_ii| = |A_kl|·(1 + u²a_u) with a_u = (A_kl⁻¹)_ii,
/// - the completed-square exponent is γ − σ·μ with μ = |h|²,
///   h = d − m^{(i)} (the electron-i block of the product mean m),
/// - the closed-form direction sees δ(σ) = |q₀ + σ·cross·h|²
///   = β − ε·σ + ω·σ² and b(σ) = a_t − c·σ, where q₀ is the J_t contraction
///   of m, cross = v_tᵀA_kl⁻¹e_i, c = cross², and ω = c·μ.
///
/// The overall exp(γ) enters through the caller's S_kl factor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SigmaCoeffs {
    pub a_t: f64,
    pub c: f64,
    pub a_u: f64,
    pub mu: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub omega: f64,
}

pub(crate) fn sigma_coeffs(
    pp: &PairProduct,
    t_coupling: &PairCoupling,
    u_electron: usize,
    frame: [f64; 3],
    u_center: [f64; 3],
) -> Result<SigmaCoeffs, HsqError> {
    if u_center.iter().any(|x| !x.is_finite()) {
        return Err(HsqError::DomainError {
            reason: "nuclear position must be finite".into(),
        });
    }
    PairCoupling::single(u_electron, pp.n_electrons())?;
    let a_t = t_coupling.trace_with(pp.inv_a_kl())?;
    let channel = CoulombChannel::to_nucleus(pp, u_electron, frame)?;
    let m_f = block_solve(pp.chol_a_kl(), channel.shifted_e());

    let inv = pp.inv_a_kl();
    let i = u_electron;
    let a_u = inv.get(i, i);
    if a_t <= 0.0 || a_u <= 0.0 {
        return Err(HsqError::DomainError {
            reason: format!("direction weights must be positive (a_t = {a_t:.3e}, a_u = {a_u:.3e})"),
        });
    }

    let h = [
        u_center[0] - frame[0] - m_f[3 * i],
        u_center[1] - frame[1] - m_f[3 * i + 1],
        u_center[2] - frame[2] - m_f[3 * i + 2],
    ];
    let mu = h[0] * h[0] + h[1] * h[1] + h[2] * h[2];

    let (cross, q0) = match *t_coupling {
        PairCoupling::Inter { i: ti, j: tj, .. } => (
            inv.get(ti, i) - inv.get(tj, i),
            [
                m_f[3 * ti] - m_f[3 * tj],
                m_f[3 * ti + 1] - m_f[3 * tj + 1],
                m_f[3 * ti + 2] - m_f[3 * tj + 2],
            ],
        ),
        PairCoupling::Single { p: tp, .. } => (
            inv.get(tp, i),
            [m_f[3 * tp], m_f[3 * tp + 1], m_f[3 * tp + 2]],
        ),
    };

    let beta = q0[0] * q0[0] + q0[1] * q0[1] + q0[2] * q0[2];
    let epsilon = -2.0 * cross * (q0[0] * h[0] + q0[1] * h[1] + q0[2] * h[2]);
    let c = cross * cross;
    Ok(SigmaCoeffs {
        a_t,
        c,
        a_u,
        mu,
        beta,
        epsilon,
        omega: c * mu,
    })
}

/// S_kl times the double-Coulomb reduction
///
///   (2/√π)·∫₀^∞ (1+u²a_u)^{−3/2}·e^{−σ(u)·μ}·erf(√(δ/b))/√δ du,
///
/// where the inner closed form used
/// ∫₀^∞ (1+bt²)^{−3/2}·e^{−δt²/(1+bt²)} dt = (√π/2)·erf(√(δ/b))/√δ.
///
/// For μ > 0 the substitution x = σ(u)·μ turns the outer integral into
/// (1/√(πμ))·∫₀^{μ/a_u} x^{−1/2}·e^{−x}·erf(√(δ/b))/√δ dx and the
/// square-root endpoint map removes the x^{−1/2} singularity (equivalently,
/// x = y² would do the same by hand). For μ = 0 the exponential weight is
/// flat and the u form is integrated directly on [0, ∞) under the rational
/// map u = w/(1−w).
pub(crate) fn sigma_integral(
    s_kl: f64,
    sc: &SigmaCoeffs,
    q: &QuadratureSpec,
) -> Result<f64, HsqError> {
    let sigma_max = 1.0 / sc.a_u;
    let b_end = sc.a_t - sc.c * sigma_max;
    if b_end < -1e-12 * sc.a_t {
        return Err(HsqError::DomainError {
            reason: format!(
                "b(u) reaches {b_end:.3e} on the integration range (c = {:.6e} exceeds a_t·a_u = {:.6e})",
                sc.c,
                sc.a_t * sc.a_u
            ),
        });
    }

    // b(σ) > 0 strictly inside the range; if roundoff drives it to ≤ 0 near
    // the far endpoint, erf(√(δ/b)) has saturated and the factor is 1/√δ.
    let undefined_point = Cell::new(false);
    let erf_factor = |sigma: f64| {
        let delta = (sc.beta - sc.epsilon * sigma) + sc.omega * sigma * sigma;
        let b = sc.a_t - sc.c * sigma;
        if b > 0.0 {
            erf_ratio(delta, b)
        } else if delta > 0.0 {
            1.0 / delta.sqrt()
        } else {
            undefined_point.set(true);
            0.0
        }
    };

    let value = if sc.mu > 0.0 {
        let x_max = (sc.mu * sigma_max).min(X_CAP);
        let mu = sc.mu;
        let spec = QuadratureSpec {
            transform: Transform::SqrtEndpoint,
            ..*q
        };
        let result = integrate(
            |x: f64| x.powf(-0.5) * (-x).exp() * erf_factor(x / mu),
            0.0,
            x_max,
            &spec,
        )?;
        s_kl / (PI * mu).sqrt() * result.value
    } else {
        let spec = QuadratureSpec {
            transform: Transform::RationalInfinite,
            ..*q
        };
        let result = integrate(
            |u: f64| {
                let grown = 1.0 + u * u * sc.a_u;
                let sigma = u * u / grown;
                grown.powf(-1.5) * (-sigma * sc.mu).exp() * erf_factor(sigma)
            },
            0.0,
            f64::INFINITY,
            &spec,
        )?;
        s_kl * 2.0 / PI.sqrt() * result.value
    };

    if undefined_point.get() {
        return Err(HsqError::DomainError {
            reason: "erf factor undefined: b(u) ≤ 0 and δ(u) ≤ 0 met on the integration range"
                .into(),
        });
    }
    Ok(value)
}

/// Coefficients of ⟨1/(|r_i − r_j|·|r_p − a|)⟩ in the frame shifted onto the
/// nucleus at a_pos.
pub fn rijrpa_coeffs(
    pp: &PairProduct,
    i: usize,
    j: usize,
    p: usize,
    a_pos: [f64; 3],
) -> Result<RijRpaCoefficients, HsqError> {
    let inter = PairCoupling::inter(i, j, pp.n_electrons())?;
    let sc = sigma_coeffs(pp, &inter, p, a_pos, a_pos)?;
    let channel = CoulombChannel::to_nucleus(pp, p, a_pos)?;
    let m_a = block_solve(pp.chol_a_kl(), channel.shifted_e());
    let gamma_a = dot(channel.shifted_e(), &m_a) - channel.shifted_eta();
    Ok(RijRpaCoefficients {
        a_ij: sc.a_t,
        a_pp: sc.a_u,
        c: sc.c,
        gamma_a,
        beta_a: sc.beta,
        mu_a: sc.mu,
        epsilon_a: sc.epsilon,
        omega_a: sc.omega,
    })
}

/// ⟨φ_k|1/(|r_i − r_j|·|r_p|)|φ_l⟩ for shift-free bases (e_kl = 0) with the
/// nucleus at the origin:
///
///   (4/π)·π^{3n/2}·|A_kl|^{−3/2}·arcsin(√(c/(a·b)))/√c,
///
/// with a = Tr(J_ij·A_kl⁻¹), b = (A_kl⁻¹)_pp, c = ((A_kl⁻¹)_ip − (A_kl⁻¹)_jp)².
/// Cauchy–Schwarz in the A_kl⁻¹ inner product guarantees a·b ≥ c; below
/// c/(a·b) = 1e-10 the arcsin is taken by series so c → 0 has the exact limit
/// 1/√(a·b).
pub fn inv_rij_rpa_zero_shift(
    a_kl: &SpdMatrix,
    i: usize,
    j: usize,
    p: usize,
) -> Result<f64, HsqError> {
    let n = a_kl.dim();
    let inter = PairCoupling::inter(i, j, n)?;
    PairCoupling::single(p, n)?;
    let inv = a_kl.inv()?;
    let a = inter.trace_with(inv.matrix())?;
    let b = inv.get(p, p);
    let cross = inv.get(i, p) - inv.get(j, p);
    let c = cross * cross;
    let ab = a * b;
    if ab < c {
        return Err(HsqError::DomainError {
            reason: format!("arcsin argument c/(a·b) = {:.6e} exceeds 1", c / ab),
        });
    }
    let prefactor = (4.0 / PI) * PI.powf(1.5 * n as f64) * a_kl.det()?.powf(-1.5);
    let ratio = c / ab;
    if ratio < 1e-10 {
        Ok(prefactor / ab.sqrt() * (1.0 + ratio / 6.0))
    } else {
        Ok(prefactor * ratio.sqrt().asin() / c.sqrt())
    }
}

/// ⟨φ_k|1/(|r_i − r_j|·|r_p − a|)|φ_l⟩ by adaptive 1-D quadrature.
///
/// Both Coulomb factors are opened with auxiliary Gaussians; the r_ij
/// direction closes into an erf and the nuclear direction survives as the
/// one-dimensional integral of [`sigma_integral`]. For zero shifts with the
/// nucleus at the origin this reproduces [`inv_rij_rpa_zero_shift`].
pub fn inv_rij_rpa_general(
    pp: &PairProduct,
    i: usize,
    j: usize,
    p: usize,
    a_pos: [f64; 3],
    q: &QuadratureSpec,
) -> Result<f64, HsqError> {
    let inter = PairCoupling::inter(i, j, pp.n_electrons())?;
    let sc = sigma_coeffs(pp, &inter, p, a_pos, a_pos)?;
    sigma_integral(pp.overlap(), &sc, q)
}
