use crate::{MatError, Matrix};

/// Relative symmetry tolerance accepted at construction.
const SYMMETRY_RTOL: f64 = 1e-14;

/// Relative pivot threshold: a Cholesky pivot at or below
/// `PIVOT_RTOL · max_diagonal` counts as loss of positive definiteness.
/// There is deliberately no eigenvalue-based repair; ill-conditioned inputs
/// fail loudly.
const PIVOT_RTOL: f64 = 1e-13;

/// Symmetric positive-definite n×n matrix.
///
/// Symmetry is enforced at construction (within `1e-14` relative, then
/// exactly symmetrized); positive definiteness surfaces through
/// [`SpdMatrix::cholesky`], which every determinant/inverse/solve goes
/// through.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    m: Matrix,
}

impl SpdMatrix {
    /// Wraps a dense matrix, checking symmetry.
    pub fn from_matrix(m: Matrix) -> Result<Self, MatError> {
        let scale = m.frobenius().max(f64::MIN_POSITIVE);
        for i in 0..m.dim() {
            for j in (i + 1)..m.dim() {
                let delta = (m.get(i, j) - m.get(j, i)).abs();
                if delta > SYMMETRY_RTOL * scale {
                    return Err(MatError::NotSymmetric { i, j, delta });
                }
            }
        }
        Ok(SpdMatrix { m: m.symmetrized() })
    }

    /// Builds from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatError> {
        SpdMatrix::from_matrix(Matrix::from_rows(rows)?)
    }

    /// Identity of dimension n.
    pub fn identity(n: usize) -> Self {
        SpdMatrix {
            m: Matrix::identity(n),
        }
    }

    /// Scaled identity c·Iₙ (c > 0 for validity).
    pub fn scaled_identity(n: usize, c: f64) -> Self {
        SpdMatrix {
            m: Matrix::identity(n).scale(c),
        }
    }

    /// Matrix dimension n.
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Entry (i, j).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m.get(i, j)
    }

    /// Dense view.
    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Sum with another SPD matrix (again SPD).
    pub fn add(&self, other: &SpdMatrix) -> Result<SpdMatrix, MatError> {
        Ok(SpdMatrix {
            m: self.m.add(&other.m)?,
        })
    }

    /// Lower-triangular Cholesky factor L with L Lᵀ = self.
    ///
    /// Fails with [`MatError::NotPositiveDefinite`] when a pivot drops to or
    /// below `1e-13` times the largest diagonal entry.
    pub fn cholesky(&self) -> Result<CholeskyFactor, MatError> {
        let n = self.dim();
        let max_diag = (0..n)
            .map(|i| self.get(i, i))
            .fold(f64::MIN_POSITIVE, f64::max);
        let threshold = PIVOT_RTOL * max_diag;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= threshold {
                        return Err(MatError::NotPositiveDefinite { row: i, pivot: sum });
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Ok(CholeskyFactor { n, l })
    }

    /// Determinant via Cholesky (always positive for an SPD matrix).
    pub fn det(&self) -> Result<f64, MatError> {
        Ok(self.cholesky()?.det())
    }

    /// Inverse via Cholesky.
    pub fn inv(&self) -> Result<SpdMatrix, MatError> {
        let inv = self.cholesky()?.inverse();
        Ok(SpdMatrix {
            m: inv.symmetrized(),
        })
    }

    /// Validates positive definiteness (runs the factorization).
    pub fn validate(&self) -> Result<(), MatError> {
        self.cholesky().map(|_| ())
    }
}

/// Cached lower-triangular Cholesky factor of an SPD matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    l: Vec<f64>,
}

impl CholeskyFactor {
    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry (i, j) of L (zero above the diagonal).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.l[i * self.n + j]
        }
    }

    /// Dense lower-triangular matrix L.
    pub fn lower(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    /// Determinant of the factored matrix, (Π L_ii)².
    pub fn det(&self) -> f64 {
        let p: f64 = (0..self.n).map(|i| self.l[i * self.n + i]).product();
        p * p
    }

    /// Solves (L Lᵀ) x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve dimension mismatch");
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }

    /// Inverse of the factored matrix, column by column.
    pub fn inverse(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            for (i, value) in col.iter().enumerate() {
                out.set(i, j, *value);
            }
        }
        out
    }
}
