use ecg_core::{
    laplacian_polynomial, quadratic_moment, quartic_moment, EcgBasisFunction, LaplacianTarget,
    PairProduct,
};

use crate::HsqError;

/// ⟨∇_i²φ_k|∇_j²φ_l⟩, the biharmonic cross term of the squared kinetic
/// energy.
///
/// Each Laplacian acts on its own Gaussian as a quadratic polynomial,
/// ∇_i²φ = [(r−s)ᵀŪ(r−s) + c₀]φ, so the element expands into a Gaussian
/// quartic moment, two quadratic moments, and the overlap:
///
///   quartic(U_k, s_k; U_l, s_l) + c_l·quadratic(U_k, s_k)
///   + c_k·quadratic(U_l, s_l) + c_k·c_l·S_kl.
pub fn del4_cross(
    pp: &PairProduct,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
    i: usize,
    j: usize,
) -> Result<f64, HsqError> {
    let bp = laplacian_polynomial(bra, LaplacianTarget::Particle(i))?;
    let kp = laplacian_polynomial(ket, LaplacianTarget::Particle(j))?;
    let quartic = quartic_moment(pp, &bp.u, &bp.p, &kp.u, &kp.p)?;
    let bra_quad = quadratic_moment(pp, &bp.u, &bp.p)?;
    let ket_quad = quadratic_moment(pp, &kp.u, &kp.p)?;
    Ok(quartic + kp.c0 * bra_quad + bp.c0 * ket_quad + bp.c0 * kp.c0 * pp.overlap())
}
