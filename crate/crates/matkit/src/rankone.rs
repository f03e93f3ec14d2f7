use crate::{MatError, Matrix, SpdMatrix};

/// det(G + a·B) for invertible G and rank-one B, via
/// det(G)·(1 + a·Tr(B G⁻¹)).
///
/// `g` must be SPD (its factorization supplies det and inverse); `b` is any
/// square matrix of matching dimension, used only through Tr(B G⁻¹), so the
/// identity is exact whenever rank(B) ≤ 1.
pub fn det_rank1_update(g: &SpdMatrix, a: f64, b: &Matrix) -> Result<f64, MatError> {
    if g.dim() != b.dim() {
        return Err(MatError::DimensionMismatch {
            left: g.dim(),
            right: b.dim(),
        });
    }
    let chol = g.cholesky()?;
    let ginv = chol.inverse();
    let t = trace_product(&[b, &ginv])?;
    Ok(chol.det() * (1.0 + a * t))
}

/// (G + B)⁻¹ for rank-one B, via the Sherman–Morrison form
/// G⁻¹ − G⁻¹ B G⁻¹ / (1 + Tr(B G⁻¹)).
pub fn inv_rank1_update(g: &SpdMatrix, b: &Matrix) -> Result<Matrix, MatError> {
    if g.dim() != b.dim() {
        return Err(MatError::DimensionMismatch {
            left: g.dim(),
            right: b.dim(),
        });
    }
    let ginv = g.cholesky()?.inverse();
    let denom = 1.0 + trace_product(&[b, &ginv])?;
    if denom.abs() < 1e-300 {
        return Err(MatError::NotPositiveDefinite {
            row: 0,
            pivot: denom,
        });
    }
    let correction = ginv.mul(b)?.mul(&ginv)?.scale(-1.0 / denom);
    ginv.add(&correction)
}

/// det(G + H₁ + H₂) for rank-one H₁, H₂:
/// det(G)·[1 + Tr(H₁G⁻¹) + Tr(H₂G⁻¹)
///         + Tr(H₁G⁻¹)·Tr(H₂G⁻¹) − Tr(H₁G⁻¹H₂G⁻¹)].
pub fn det_two_rank1(g: &SpdMatrix, h1: &Matrix, h2: &Matrix) -> Result<f64, MatError> {
    if g.dim() != h1.dim() {
        return Err(MatError::DimensionMismatch {
            left: g.dim(),
            right: h1.dim(),
        });
    }
    if g.dim() != h2.dim() {
        return Err(MatError::DimensionMismatch {
            left: g.dim(),
            right: h2.dim(),
        });
    }
    let chol = g.cholesky()?;
    let ginv = chol.inverse();
    let t1 = trace_product(&[h1, &ginv])?;
    let t2 = trace_product(&[h2, &ginv])?;
    let t12 = trace_product(&[h1, &ginv, h2, &ginv])?;
    Ok(chol.det() * (1.0 + t1 + t2 + t1 * t2 - t12))
}

/// Trace of a product of square matrices, Tr(M₁M₂⋯M_k), without storing the
/// full product: the last factor is applied column by column.
pub fn trace_product(ms: &[&Matrix]) -> Result<f64, MatError> {
    let first = ms.first().expect("trace_product needs at least one factor");
    let n = first.dim();
    for m in ms {
        if m.dim() != n {
            return Err(MatError::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
    }
    if ms.len() == 1 {
        return Ok(first.trace());
    }
    let mut product = ms[0].clone();
    for m in &ms[1..ms.len() - 1] {
        product = product.mul(m)?;
    }
    let last = ms[ms.len() - 1];
    let mut tr = 0.0;
    for i in 0..n {
        for k in 0..n {
            tr += product.get(i, k) * last.get(k, i);
        }
    }
    Ok(tr)
}
