//! Rayleigh quotient, energy variance, and the Weinstein, Temple, and
//! Stevenson lower bounds on the ground-state energy.

use crate::eigen::quadratic;
use crate::matrices::SpectralMatrices;
use crate::SpectralError;

/// Variances in (−1e-9, 0) are treated as roundoff and clamped to zero;
/// anything more negative is a kernel inconsistency and fatal.
const VARIANCE_CLAMP: f64 = 1e-9;

/// Where the Temple spectral-gap parameter β came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaSource {
    /// Second Ritz value of the pencil. Not rigorous: Ritz values bound the
    /// exact spectrum from above, so β ≤ E₂ is unverified.
    SecondRitz,
    /// Caller-supplied value.
    UserSupplied,
}

/// Upper bound, variance, and the lower-bound family for one ground state.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub energy_upper: f64,
    pub variance: f64,
    /// Set when a small negative variance was clamped to zero.
    pub variance_clamped: bool,
    /// Temple gap parameter (NaN when no second Ritz value exists and none
    /// was supplied).
    pub beta: f64,
    pub beta_source: BetaSource,
    pub weinstein_lb: f64,
    /// Always set: Weinstein validity needs a closeness condition on the
    /// exact spectrum that cannot be checked from within the basis.
    pub weinstein_caveat: bool,
    pub temple_lb: Option<f64>,
    pub temple_valid: bool,
    pub stevenson_alpha: Option<f64>,
    pub stevenson_lb: Option<f64>,
}

/// E = cᵀHc / cᵀSc and σ² = cᵀH²c / cᵀSc − E² for a coefficient vector.
pub fn rayleigh_and_variance(
    m: &SpectralMatrices,
    c: &[f64],
) -> Result<(f64, f64), SpectralError> {
    if c.len() != m.s.dim() {
        return Err(SpectralError::DimensionMismatch {
            left: c.len(),
            right: m.s.dim(),
        });
    }
    if c.iter().all(|&x| x == 0.0) {
        return Err(SpectralError::ZeroVector);
    }
    let norm = quadratic(&m.s, c, c);
    let energy = quadratic(&m.h, c, c) / norm;
    let second = quadratic(&m.h2, c, c) / norm;
    Ok((energy, second - energy * energy))
}

/// Weinstein bound E − σ: some exact eigenvalue lies in [E − σ, E + σ].
pub fn weinstein(energy: f64, sigma2: f64) -> Result<f64, SpectralError> {
    if sigma2 < 0.0 {
        return Err(SpectralError::NegativeVariance { value: sigma2 });
    }
    Ok(energy - sigma2.sqrt())
}

/// Temple bound E − σ²/(β − E), valid for E₁ < β ≤ E₂ and E < β.
pub fn temple(energy: f64, sigma2: f64, beta: f64) -> Result<f64, SpectralError> {
    if sigma2 < 0.0 {
        return Err(SpectralError::NegativeVariance { value: sigma2 });
    }
    if beta <= energy {
        return Err(SpectralError::BetaNotAboveE { beta, energy });
    }
    Ok(energy - sigma2 / (beta - energy))
}

/// Stevenson bound α − √((α − E)² + σ²), monotone nondecreasing in α and
/// reducing to Weinstein at α = E.
pub fn stevenson(energy: f64, sigma2: f64, alpha: f64) -> Result<f64, SpectralError> {
    if sigma2 < 0.0 {
        return Err(SpectralError::NegativeVariance { value: sigma2 });
    }
    Ok(alpha - ((alpha - energy).powi(2) + sigma2).sqrt())
}

/// Evaluates the whole bound family for the Ritz ground state of `m`.
///
/// β defaults to the second Ritz value when not supplied; Temple is reported
/// only when β > E (and a β exists at all). The Stevenson bound is computed
/// only for a caller-chosen α.
pub fn bounds_report(
    m: &SpectralMatrices,
    beta: Option<f64>,
    stevenson_alpha: Option<f64>,
) -> Result<BoundsReport, SpectralError> {
    let (energy, raw_variance) = rayleigh_and_variance(m, &m.ground_vector)?;
    let (variance, variance_clamped) = if raw_variance >= 0.0 {
        (raw_variance, false)
    } else if raw_variance > -VARIANCE_CLAMP {
        (0.0, true)
    } else {
        return Err(SpectralError::NegativeVariance {
            value: raw_variance,
        });
    };

    let (beta, beta_source) = match beta {
        Some(b) => (b, BetaSource::UserSupplied),
        None => (
            m.ritz_values.get(1).copied().unwrap_or(f64::NAN),
            BetaSource::SecondRitz,
        ),
    };
    let (temple_lb, temple_valid) = if beta.is_finite() && beta > energy {
        (Some(temple(energy, variance, beta)?), true)
    } else {
        (None, false)
    };
    let stevenson_lb = match stevenson_alpha {
        Some(alpha) => Some(stevenson(energy, variance, alpha)?),
        None => None,
    };

    Ok(BoundsReport {
        energy_upper: energy,
        variance,
        variance_clamped,
        beta,
        beta_source,
        weinstein_lb: weinstein(energy, variance)?,
        weinstein_caveat: true,
        temple_lb,
        temple_valid,
        stevenson_alpha,
        stevenson_lb,
    })
}
