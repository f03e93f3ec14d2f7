use crate::{EcgBasisFunction, EcgError};
use matkit::{block_apply, block_quadratic, block_solve, dot, CholeskyFactor, Matrix, SpdMatrix};

/// Product of two basis functions in Gaussian normal form, with the pair
/// matrix factorization and inverse cached for the downstream kernels.
#[derive(Debug, Clone)]
pub struct PairProduct {
    n: usize,
    a_kl: SpdMatrix,
    chol: CholeskyFactor,
    inv: Matrix,
    e_kl: Vec<f64>,
    eta_kl: f64,
    gamma_kl: f64,
    s_kl: f64,
    mean: Vec<f64>,
}

/// Gaussian measure of a pair product: φ_kφ_l ∝ N(mean, C ⊗ I₃).
#[derive(Debug, Clone)]
pub struct GaussianMoments {
    /// m = Ā_kl⁻¹ e_kl.
    pub mean: Vec<f64>,
    /// C = A_kl⁻¹/2; the full covariance is C ⊗ I₃.
    pub covariance_factor: Matrix,
}

/// Combines bra and ket into the cached product form.
pub fn pair_product(
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
) -> Result<PairProduct, EcgError> {
    if bra.n_electrons() != ket.n_electrons() {
        return Err(EcgError::ElectronCountMismatch {
            left: bra.n_electrons(),
            right: ket.n_electrons(),
        });
    }
    let n = bra.n_electrons();
    let a_kl = bra.a().add(ket.a())?;
    let chol = a_kl.cholesky()?;
    let inv = chol.inverse().symmetrized();

    let bra_term = block_apply(bra.a().matrix(), bra.s());
    let ket_term = block_apply(ket.a().matrix(), ket.s());
    let e_kl: Vec<f64> = bra_term.iter().zip(&ket_term).map(|(x, y)| x + y).collect();

    let eta_kl = block_quadratic(bra.a().matrix(), bra.s(), bra.s())
        + block_quadratic(ket.a().matrix(), ket.s(), ket.s());
    let mean = block_solve(&chol, &e_kl);
    let gamma_kl = dot(&e_kl, &mean) - eta_kl;

    let pi = std::f64::consts::PI;
    let s_kl = gamma_kl.exp() * pi.powf(1.5 * n as f64) * chol.det().powf(-1.5);

    Ok(PairProduct {
        n,
        a_kl,
        chol,
        inv,
        e_kl,
        eta_kl,
        gamma_kl,
        s_kl,
        mean,
    })
}

impl PairProduct {
    pub fn n_electrons(&self) -> usize {
        self.n
    }

    /// Pair exponent matrix A_kl = A_k + A_l.
    pub fn a_kl(&self) -> &SpdMatrix {
        &self.a_kl
    }

    /// Cached Cholesky factor of A_kl.
    pub fn chol_a_kl(&self) -> &CholeskyFactor {
        &self.chol
    }

    /// Cached symmetrized A_kl⁻¹.
    pub fn inv_a_kl(&self) -> &Matrix {
        &self.inv
    }

    /// Linear coefficient e_kl = Ā_k s_k + Ā_l s_l.
    pub fn e_kl(&self) -> &[f64] {
        &self.e_kl
    }

    /// η_kl = s_kᵀĀ_k s_k + s_lᵀĀ_l s_l.
    pub fn eta_kl(&self) -> f64 {
        self.eta_kl
    }

    /// γ_kl = e_klᵀĀ_kl⁻¹e_kl − η_kl.
    pub fn gamma_kl(&self) -> f64 {
        self.gamma_kl
    }

    /// Overlap ⟨φ_k|φ_l⟩ = exp(γ_kl)·π^{3n/2}·|A_kl|^{−3/2}.
    pub fn overlap(&self) -> f64 {
        self.s_kl
    }

    /// Gaussian mean and covariance of the product measure.
    pub fn moments(&self) -> GaussianMoments {
        GaussianMoments {
            mean: self.mean.clone(),
            covariance_factor: self.inv.scale(0.5),
        }
    }

    /// Mean m = Ā_kl⁻¹e_kl without cloning.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }
}
