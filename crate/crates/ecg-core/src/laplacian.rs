use crate::{EcgBasisFunction, EcgError};
use matkit::{MatError, Matrix, PairCoupling};

/// Which Laplacian to represent: one electron's or the sum over all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianTarget {
    Particle(usize),
    All,
}

/// Polynomial form of a Laplacian acting on a Gaussian:
/// ∇²φ = [(r−p)ᵀ(U⊗I₃)(r−p) + c0]·φ.
#[derive(Debug, Clone)]
pub struct LaplacianPolynomial {
    pub u: Matrix,
    pub p: Vec<f64>,
    pub c0: f64,
}

/// Coefficients of ∇_i²φ = [4(r−s)ᵀĀJ̄_iiĀ(r−s) − 6A_ii]φ, i.e.
/// U = 4·A·J_ii·A, p = s, c0 = −6·A_ii; summing over all electrons gives
/// U = 4·A·A, c0 = −6·Tr(A).
pub fn laplacian_polynomial(
    f: &EcgBasisFunction,
    target: LaplacianTarget,
) -> Result<LaplacianPolynomial, EcgError> {
    let n = f.n_electrons();
    let a = f.a().matrix();
    let (u, c0) = match target {
        LaplacianTarget::Particle(i) => {
            if i >= n {
                return Err(MatError::IndexOutOfRange { index: i, n }.into());
            }
            let j_ii = PairCoupling::single(i, n)?.dense();
            let u = a.mul(&j_ii)?.mul(a)?.scale(4.0);
            (u, -6.0 * f.a().get(i, i))
        }
        LaplacianTarget::All => {
            let u = a.mul(a)?.scale(4.0);
            (u, -6.0 * a.trace())
        }
    };
    Ok(LaplacianPolynomial {
        u,
        p: f.s().to_vec(),
        c0,
    })
}
