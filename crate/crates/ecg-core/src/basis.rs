use crate::EcgError;
use matkit::{block_quadratic, Matrix, SpdMatrix};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Current version of the basis-set file format.
pub const BASIS_FILE_VERSION: u32 = 1;

/// One floating explicitly correlated Gaussian
/// φ(r) = exp[−(r−s)ᵀ(A⊗I₃)(r−s)].
#[derive(Debug, Clone)]
pub struct EcgBasisFunction {
    n: usize,
    a: SpdMatrix,
    s: Vec<f64>,
}

impl EcgBasisFunction {
    /// Builds a shifted Gaussian; validates that A is SPD and s has 3n finite
    /// components.
    pub fn new(a: SpdMatrix, s: Vec<f64>) -> Result<Self, EcgError> {
        let n = a.dim();
        if s.len() != 3 * n || s.iter().any(|v| !v.is_finite()) {
            return Err(EcgError::InvalidShift {
                got: s.len(),
                expected: 3 * n,
            });
        }
        a.validate()?;
        Ok(EcgBasisFunction { n, a, s })
    }

    /// Non-floating special case s = 0.
    pub fn ecg(a: SpdMatrix) -> Result<Self, EcgError> {
        let n = a.dim();
        EcgBasisFunction::new(a, vec![0.0; 3 * n])
    }

    pub fn n_electrons(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &SpdMatrix {
        &self.a
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Evaluates φ at a 3n-dimensional configuration point.
    pub fn value(&self, r: &[f64]) -> f64 {
        assert_eq!(r.len(), 3 * self.n, "configuration point must have 3n components");
        let d: Vec<f64> = r.iter().zip(&self.s).map(|(ri, si)| ri - si).collect();
        (-block_quadratic(self.a.matrix(), &d, &d)).exp()
    }

    /// Relabels electrons: entry i of the result refers to electron perm[i]
    /// of the original, so A′ = PAPᵀ and s′ is the block permutation of s.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, EcgError> {
        validate_permutation(perm, self.n)?;
        let a = Matrix::from_fn(self.n, |i, j| self.a.get(perm[i], perm[j]));
        let mut s = vec![0.0; 3 * self.n];
        for i in 0..self.n {
            for c in 0..3 {
                s[3 * i + c] = self.s[3 * perm[i] + c];
            }
        }
        Ok(EcgBasisFunction {
            n: self.n,
            a: SpdMatrix::from_matrix(a)?,
            s,
        })
    }
}

fn validate_permutation(perm: &[usize], n: usize) -> Result<(), EcgError> {
    if perm.len() != n {
        return Err(EcgError::InvalidPermutation {
            n,
            reason: "length differs from electron count",
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(EcgError::InvalidPermutation {
                n,
                reason: "index out of range",
            });
        }
        if seen[p] {
            return Err(EcgError::InvalidPermutation {
                n,
                reason: "repeated index",
            });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Serialized basis set: `{version, n_electrons, functions:[…]}` with each
/// function storing the lower triangle of A row-major plus its shift vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisSetFile {
    pub version: u32,
    pub n_electrons: usize,
    pub functions: Vec<BasisFunctionRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFunctionRecord {
    #[serde(rename = "A_lower_triangle_row_major")]
    pub a_lower_triangle_row_major: Vec<f64>,
    pub s: Vec<f64>,
}

impl BasisSetFile {
    /// Captures a basis in file form.
    pub fn from_functions(functions: &[EcgBasisFunction]) -> Result<Self, EcgError> {
        let n_electrons = match functions.first() {
            Some(f) => f.n_electrons(),
            None => {
                return Err(EcgError::BasisFile {
                    reason: "basis must contain at least one function".into(),
                })
            }
        };
        let mut records = Vec::with_capacity(functions.len());
        for f in functions {
            if f.n_electrons() != n_electrons {
                return Err(EcgError::BasisFile {
                    reason: "mixed electron counts in one basis".into(),
                });
            }
            let mut tri = Vec::with_capacity(n_electrons * (n_electrons + 1) / 2);
            for i in 0..n_electrons {
                for j in 0..=i {
                    tri.push(f.a().get(i, j));
                }
            }
            records.push(BasisFunctionRecord {
                a_lower_triangle_row_major: tri,
                s: f.s().to_vec(),
            });
        }
        Ok(BasisSetFile {
            version: BASIS_FILE_VERSION,
            n_electrons,
            functions: records,
        })
    }

    /// Reconstructs the basis functions, validating shapes and definiteness.
    pub fn to_functions(&self) -> Result<Vec<EcgBasisFunction>, EcgError> {
        if self.version != BASIS_FILE_VERSION {
            return Err(EcgError::BasisFile {
                reason: format!(
                    "unsupported version {} (expected {BASIS_FILE_VERSION})",
                    self.version
                ),
            });
        }
        let n = self.n_electrons;
        if n == 0 {
            return Err(EcgError::BasisFile {
                reason: "n_electrons must be positive".into(),
            });
        }
        let tri_len = n * (n + 1) / 2;
        let mut out = Vec::with_capacity(self.functions.len());
        for (idx, record) in self.functions.iter().enumerate() {
            if record.a_lower_triangle_row_major.len() != tri_len {
                return Err(EcgError::BasisFile {
                    reason: format!(
                        "function {idx}: expected {tri_len} lower-triangle entries, got {}",
                        record.a_lower_triangle_row_major.len()
                    ),
                });
            }
            let mut a = Matrix::zeros(n);
            let mut pos = 0;
            for i in 0..n {
                for j in 0..=i {
                    let v = record.a_lower_triangle_row_major[pos];
                    a.set(i, j, v);
                    a.set(j, i, v);
                    pos += 1;
                }
            }
            let spd = SpdMatrix::from_matrix(a).map_err(|e| EcgError::BasisFile {
                reason: format!("function {idx}: {e}"),
            })?;
            spd.validate().map_err(|e| EcgError::BasisFile {
                reason: format!("function {idx}: {e}"),
            })?;
            out.push(EcgBasisFunction::new(spd, record.s.clone()).map_err(|e| {
                EcgError::BasisFile {
                    reason: format!("function {idx}: {e}"),
                }
            })?);
        }
        Ok(out)
    }
}

/// Writes a basis set as pretty-printed JSON with a trailing newline; the
/// rendering is deterministic, so read → write round trips are byte-identical.
pub fn write_basis_file(path: &Path, functions: &[EcgBasisFunction]) -> Result<(), EcgError> {
    let file = BasisSetFile::from_functions(functions)?;
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| EcgError::BasisFile {
        reason: e.to_string(),
    })?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads and validates a basis-set file.
pub fn read_basis_file(path: &Path) -> Result<Vec<EcgBasisFunction>, EcgError> {
    let text = std::fs::read_to_string(path)?;
    let file: BasisSetFile = serde_json::from_str(&text).map_err(|e| EcgError::BasisFile {
        reason: e.to_string(),
    })?;
    file.to_functions()
}
