//! Seeded Monte Carlo under the pair-product Gaussian weight.

use ecg_core::PairProduct;
use matkit::SpdMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{OracleError, OracleEstimate, OracleMethod};

/// Estimates S_kl · E[f(r)] under the normalized product Gaussian, i.e. the
/// integral ∫ f(r) φ_k(r) φ_l(r) d³ⁿr.
///
/// Draws r = m + L z per Cartesian axis, where L is the Cholesky factor of
/// the n×n covariance block C = A_kl⁻¹/2 and z is standard normal. The same
/// factor serves all three axes because the full 3n covariance is C⊗I₃.
/// Sampling is reproducible: a fixed `seed` yields a bit-identical stream.
pub fn mc_expectation<F>(
    pp: &PairProduct,
    f: F,
    samples: usize,
    seed: u64,
) -> Result<OracleEstimate, OracleError>
where
    F: Fn(&[f64]) -> f64,
{
    if samples == 0 {
        return Err(OracleError::InvalidRequest {
            reason: "sample count must be at least 1",
        });
    }
    let n = pp.n_electrons();
    let cov = SpdMatrix::from_matrix(pp.inv_a_kl().scale(0.5))?;
    let chol = cov.cholesky()?;
    let mean = pp.mean();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; n];
    let mut r = vec![0.0; 3 * n];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;

    for index in 0..samples {
        for axis in 0..3 {
            for zj in z.iter_mut() {
                *zj = StandardNormal.sample(&mut rng);
            }
            for i in 0..n {
                let mut x = mean[3 * i + axis];
                for (j, zj) in z.iter().enumerate().take(i + 1) {
                    x += chol.get(i, j) * zj;
                }
                r[3 * i + axis] = x;
            }
        }
        let value = f(&r);
        if !value.is_finite() {
            return Err(OracleError::NonFiniteSample { index });
        }
        sum += value;
        sum_sq += value * value;
    }

    let count = samples as f64;
    let mean_f = sum / count;
    let variance = (sum_sq / count - mean_f * mean_f).max(0.0);
    let std_error = (variance / count).sqrt();
    let scale = pp.overlap();

    Ok(OracleEstimate {
        value: scale * mean_f,
        std_error: scale.abs() * std_error,
        samples,
        method: OracleMethod::Mc,
    })
}
