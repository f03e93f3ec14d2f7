//! Small dense matrix kit for correlated-Gaussian integral kernels.
//!
//! Everything here operates on n×n matrices where n is the number of
//! particles, even though the underlying configuration space is 3n-dimensional:
//! all matrices of interest have the Kronecker form M̄ = M ⊗ I₃, so
//! determinants pick up a cube (|M̄| = |M|³), traces a factor 3
//! (Tr M̄ = 3 Tr M), and matrix-vector products act blockwise on the three
//! Cartesian components. No 3n×3n matrix is ever materialized.
//!
//! The module provides
//!
//! - [`Matrix`]: a plain dense square matrix with the handful of operations
//!   the kernels need,
//! - [`SpdMatrix`] and [`CholeskyFactor`]: symmetric positive-definite
//!   matrices with Cholesky-backed determinant, inverse, and solves,
//! - [`PairCoupling`]: the rank-one inter-particle / single-particle coupling
//!   matrices J with r̄ᵀJ̄r̄ = |r_i − r_j|² or |r_p|²,
//! - rank-one and rank-two update identities for determinants and inverses
//!   (Sherman–Morrison family), which let every t²J-type modification of an
//!   SPD matrix be handled in O(n²),
//! - blockwise helpers for applying n×n matrices to 3n-component vectors.

mod coupling;
mod dense;
mod rankone;
mod spd;

pub use coupling::PairCoupling;
pub use dense::Matrix;
pub use rankone::{det_rank1_update, det_two_rank1, inv_rank1_update, trace_product};
pub use spd::{CholeskyFactor, SpdMatrix};

use thiserror::Error;

/// Errors raised by matrix construction and factorization.
#[derive(Debug, Clone, Error)]
pub enum MatError {
    /// A Cholesky pivot fell below the positivity threshold.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    /// Symmetry violated beyond the construction tolerance.
    #[error("matrix is not symmetric at ({i},{j}): asymmetry {delta:.3e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    /// Operands of incompatible dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// Particle index outside 0..n.
    #[error("particle index {index} out of range for {n} particles")]
    IndexOutOfRange { index: usize, n: usize },
    /// Inter-particle coupling with both indices equal.
    #[error("inter-particle coupling requires two distinct particles (got {i})")]
    DegeneratePair { i: usize },
}

/// Applies M ⊗ I₃ to a 3n vector stored as n consecutive (x, y, z) blocks.
pub fn block_apply(m: &Matrix, x: &[f64]) -> Vec<f64> {
    let n = m.dim();
    assert_eq!(x.len(), 3 * n, "vector length must be 3n");
    let mut out = vec![0.0; 3 * n];
    for i in 0..n {
        for j in 0..n {
            let mij = m.get(i, j);
            if mij != 0.0 {
                for c in 0..3 {
                    out[3 * i + c] += mij * x[3 * j + c];
                }
            }
        }
    }
    out
}

/// Computes xᵀ (M ⊗ I₃) y for 3n vectors x, y.
pub fn block_quadratic(m: &Matrix, x: &[f64], y: &[f64]) -> f64 {
    let my = block_apply(m, y);
    dot(x, &my)
}

/// Solves (M ⊗ I₃) out = x through three n-dimensional solves, one per
/// Cartesian component.
pub fn block_solve(chol: &CholeskyFactor, x: &[f64]) -> Vec<f64> {
    let n = chol.dim();
    assert_eq!(x.len(), 3 * n, "vector length must be 3n");
    let mut out = vec![0.0; 3 * n];
    let mut comp = vec![0.0; n];
    for c in 0..3 {
        for i in 0..n {
            comp[i] = x[3 * i + c];
        }
        let sol = chol.solve(&comp);
        for i in 0..n {
            out[3 * i + c] = sol[i];
        }
    }
    out
}

/// Plain Euclidean dot product.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dot product length mismatch");
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
