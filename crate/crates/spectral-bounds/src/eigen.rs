//! Symmetric-definite generalized eigenproblem via Cholesky reduction and
//! cyclic Jacobi rotations.

use crate::SpectralError;
use matkit::{MatError, Matrix, SpdMatrix};

/// Jacobi stops once the off-diagonal Frobenius mass falls below this
/// multiple of the matrix norm; rotations converge quadratically, so the
/// final backward error sits at machine precision.
const JACOBI_RTOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Solution of Hc = ESc: ascending eigenvalues with vectors scaled to
/// cᵀSc = 1.
#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    pub values: Vec<f64>,
    /// `vectors[m]` solves the pencil for `values[m]`, scaled to cᵀSc = 1
    /// with the largest-magnitude component positive.
    pub vectors: Vec<Vec<f64>>,
}

/// Solves Hc = ESc for symmetric H and positive-definite S.
///
/// S = LLᵀ reduces the pencil to the standard symmetric problem
/// (L⁻¹HL⁻ᵀ)y = Ey with c = L⁻ᵀy, diagonalized by cyclic Jacobi; a failed
/// Cholesky pivot reports the offending row so callers can drop the
/// linearly dependent basis function.
pub fn solve_generalized(h: &Matrix, s: &Matrix) -> Result<GeneralizedEigen, SpectralError> {
    let n = h.dim();
    if s.dim() != n {
        return Err(SpectralError::DimensionMismatch {
            left: n,
            right: s.dim(),
        });
    }
    if n == 0 {
        return Err(SpectralError::EmptyBasis);
    }
    let spd = SpdMatrix::from_matrix(s.clone())?;
    let chol = spd.cholesky().map_err(|e| match e {
        MatError::NotPositiveDefinite { row, .. } => {
            SpectralError::OverlapNotPositiveDefinite { row }
        }
        other => SpectralError::Mat(other),
    })?;
    let l = chol.lower();

    // G = L⁻¹ H L⁻ᵀ, column by column, then exactly symmetrized.
    let mut g = Matrix::zeros(n);
    for col in 0..n {
        let column: Vec<f64> = (0..n).map(|row| h.get(row, col)).collect();
        for (row, value) in forward_solve(&l, &column).into_iter().enumerate() {
            g.set(row, col, value);
        }
    }
    for row in 0..n {
        let line: Vec<f64> = (0..n).map(|col| g.get(row, col)).collect();
        for (col, value) in forward_solve(&l, &line).into_iter().enumerate() {
            g.set(row, col, value);
        }
    }
    let g = g.symmetrized();

    let (mut values, vectors_y) = jacobi_eigen(&g)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    values = order.iter().map(|&m| values[m]).collect();

    let mut vectors = Vec::with_capacity(n);
    for &m in &order {
        let y: Vec<f64> = (0..n).map(|i| vectors_y.get(i, m)).collect();
        let mut c = backward_solve(&l, &y);
        let norm2 = quadratic(s, &c, &c);
        let scale = 1.0 / norm2.sqrt();
        let lead = c
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        let sign = if lead < 0.0 { -scale } else { scale };
        for x in &mut c {
            *x *= sign;
        }
        vectors.push(c);
    }
    Ok(GeneralizedEigen { values, vectors })
}

/// Solves Lx = b for lower-triangular L.
fn forward_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for (j, xj) in x.iter().enumerate().take(i) {
            sum -= l.get(i, j) * xj;
        }
        x[i] = sum / l.get(i, i);
    }
    x
}

/// Solves Lᵀx = b for lower-triangular L.
fn backward_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = b[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            sum -= l.get(j, i) * xj;
        }
        x[i] = sum / l.get(i, i);
    }
    x
}

/// Cyclic Jacobi diagonalization of a symmetric matrix; returns unsorted
/// eigenvalues with the orthonormal eigenvector matrix (columns).
fn jacobi_eigen(g: &Matrix) -> Result<(Vec<f64>, Matrix), SpectralError> {
    let n = g.dim();
    let mut a = g.clone();
    let mut v = Matrix::identity(n);
    if n == 1 {
        return Ok((vec![a.get(0, 0)], v));
    }
    let norm = g.frobenius().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a.get(p, q).powi(2);
            }
        }
        if off.sqrt() <= JACOBI_RTOL * norm {
            let values = (0..n).map(|i| a.get(i, i)).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let tau = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    Err(SpectralError::EigenFailure)
}

/// aᵀMb for a dense square matrix.
pub(crate) fn quadratic(m: &Matrix, a: &[f64], b: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, ai) in a.iter().enumerate() {
        let mut row = 0.0;
        for (j, bj) in b.iter().enumerate() {
            row += m.get(i, j) * bj;
        }
        total += ai * row;
    }
    total
}
