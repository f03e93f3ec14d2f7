use crate::{MatError, Matrix};

/// Rank-one inter-particle or single-particle coupling matrix.
///
/// `Inter { i, j }` is the n×n matrix J with J_ii = J_jj = 1,
/// J_ij = J_ji = −1 and zeros elsewhere, so that rᵀ(J ⊗ I₃)r = |r_i − r_j|².
/// `Single { p }` has a lone 1 at (p, p), giving rᵀ(J ⊗ I₃)r = |r_p|².
/// Both are positive semidefinite with rank one; `Inter` has trace 2 and
/// `Single` trace 1.
///
/// Indices are 0-based. The type never materializes the 3n×3n form; traces
/// and quadratic forms are pure index arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCoupling {
    /// |r_i − r_j|² coupling between two distinct particles.
    Inter { i: usize, j: usize, n: usize },
    /// |r_p|² coupling of one particle to the coordinate origin.
    Single { p: usize, n: usize },
}

impl PairCoupling {
    /// Inter-particle coupling; requires i ≠ j and both in range.
    pub fn inter(i: usize, j: usize, n: usize) -> Result<Self, MatError> {
        if i >= n {
            return Err(MatError::IndexOutOfRange { index: i, n });
        }
        if j >= n {
            return Err(MatError::IndexOutOfRange { index: j, n });
        }
        if i == j {
            return Err(MatError::DegeneratePair { i });
        }
        Ok(PairCoupling::Inter { i, j, n })
    }

    /// Single-particle coupling; requires p in range.
    pub fn single(p: usize, n: usize) -> Result<Self, MatError> {
        if p >= n {
            return Err(MatError::IndexOutOfRange { index: p, n });
        }
        Ok(PairCoupling::Single { p, n })
    }

    /// Particle-space dimension n.
    pub fn dim(&self) -> usize {
        match *self {
            PairCoupling::Inter { n, .. } => n,
            PairCoupling::Single { n, .. } => n,
        }
    }

    /// Trace of the n×n coupling (2 for `Inter`, 1 for `Single`).
    pub fn trace(&self) -> f64 {
        match *self {
            PairCoupling::Inter { .. } => 2.0,
            PairCoupling::Single { .. } => 1.0,
        }
    }

    /// Dense n×n form.
    pub fn dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim());
        match *self {
            PairCoupling::Inter { i, j, .. } => {
                m.set(i, i, 1.0);
                m.set(j, j, 1.0);
                m.set(i, j, -1.0);
                m.set(j, i, -1.0);
            }
            PairCoupling::Single { p, .. } => {
                m.set(p, p, 1.0);
            }
        }
        m
    }

    /// Tr(J M) without forming the product: M_ii + M_jj − M_ij − M_ji for
    /// `Inter`, M_pp for `Single`.
    pub fn trace_with(&self, m: &Matrix) -> Result<f64, MatError> {
        if m.dim() != self.dim() {
            return Err(MatError::DimensionMismatch {
                left: self.dim(),
                right: m.dim(),
            });
        }
        Ok(match *self {
            PairCoupling::Inter { i, j, .. } => {
                m.get(i, i) + m.get(j, j) - m.get(i, j) - m.get(j, i)
            }
            PairCoupling::Single { p, .. } => m.get(p, p),
        })
    }

    /// (J ⊗ I₃) x for a 3n-component vector stored particle-blockwise.
    pub fn apply_block(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), 3 * n, "block vector length mismatch");
        let mut out = vec![0.0; 3 * n];
        match *self {
            PairCoupling::Inter { i, j, .. } => {
                for c in 0..3 {
                    let d = x[3 * i + c] - x[3 * j + c];
                    out[3 * i + c] = d;
                    out[3 * j + c] = -d;
                }
            }
            PairCoupling::Single { p, .. } => {
                for c in 0..3 {
                    out[3 * p + c] = x[3 * p + c];
                }
            }
        }
        out
    }

    /// xᵀ(J ⊗ I₃)y for 3n-component blockwise vectors.
    pub fn quadratic_block(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        assert_eq!(x.len(), 3 * n, "block vector length mismatch");
        assert_eq!(y.len(), 3 * n, "block vector length mismatch");
        match *self {
            PairCoupling::Inter { i, j, .. } => (0..3)
                .map(|c| {
                    (x[3 * i + c] - x[3 * j + c]) * (y[3 * i + c] - y[3 * j + c])
                })
                .sum(),
            PairCoupling::Single { p, .. } => {
                (0..3).map(|c| x[3 * p + c] * y[3 * p + c]).sum()
            }
        }
    }
}
