use crate::{EcgError, PairProduct};
use matkit::{block_apply, block_quadratic, dot, trace_product, MatError, Matrix};

fn check_dims(pp: &PairProduct, u: &Matrix, p: &[f64]) -> Result<(), EcgError> {
    if u.dim() != pp.n_electrons() {
        return Err(MatError::DimensionMismatch {
            left: pp.n_electrons(),
            right: u.dim(),
        }
        .into());
    }
    if p.len() != 3 * pp.n_electrons() {
        return Err(MatError::DimensionMismatch {
            left: 3 * pp.n_electrons(),
            right: p.len(),
        }
        .into());
    }
    Ok(())
}

/// ∫ (r−p)ᵀŪ(r−p)·φ_kφ_l dr = S_kl·[3·Tr(UC) + (m−p)ᵀŪ(m−p)] for
/// symmetric U, with C = A_kl⁻¹/2 and m the product mean.
pub fn quadratic_moment(pp: &PairProduct, u: &Matrix, p: &[f64]) -> Result<f64, EcgError> {
    check_dims(pp, u, p)?;
    let c = pp.inv_a_kl().scale(0.5);
    let trace_uc = trace_product(&[u, &c])?;
    let d: Vec<f64> = pp.mean().iter().zip(p).map(|(m, pi)| m - pi).collect();
    Ok(pp.overlap() * (3.0 * trace_uc + block_quadratic(u, &d, &d)))
}

/// ∫ (r−p)ᵀŪ(r−p)·(r−q)ᵀW̄(r−q)·φ_kφ_l dr for symmetric U, W.
///
/// Writing the product measure as X + m with X ~ N(0, C⊗I₃) and
/// d_U = m − p, d_W = m − q, the Gaussian fourth-moment (Isserlis) expansion
/// gives
///
/// S_kl·[ 9·Tr(UC)Tr(WC) + 6·Tr(UCWC)
///        + 3·Tr(UC)·d_WᵀW̄d_W + 3·Tr(WC)·d_UᵀŪd_U
///        + 4·d_Uᵀ((UCW)⊗I₃)d_W + (d_UᵀŪd_U)(d_WᵀW̄d_W) ].
pub fn quartic_moment(
    pp: &PairProduct,
    u: &Matrix,
    p: &[f64],
    w: &Matrix,
    q: &[f64],
) -> Result<f64, EcgError> {
    check_dims(pp, u, p)?;
    check_dims(pp, w, q)?;
    let c = pp.inv_a_kl().scale(0.5);
    let trace_uc = trace_product(&[u, &c])?;
    let trace_wc = trace_product(&[w, &c])?;
    let trace_ucwc = trace_product(&[u, &c, w, &c])?;

    let d_u: Vec<f64> = pp.mean().iter().zip(p).map(|(m, pi)| m - pi).collect();
    let d_w: Vec<f64> = pp.mean().iter().zip(q).map(|(m, qi)| m - qi).collect();
    let quad_u = block_quadratic(u, &d_u, &d_u);
    let quad_w = block_quadratic(w, &d_w, &d_w);
    let ucw = u.mul(&c)?.mul(w)?;
    let cross = dot(&d_u, &block_apply(&ucw, &d_w));

    Ok(pp.overlap()
        * (9.0 * trace_uc * trace_wc
            + 6.0 * trace_ucwc
            + 3.0 * trace_uc * quad_w
            + 3.0 * trace_wc * quad_u
            + 4.0 * cross
            + quad_u * quad_w))
}
