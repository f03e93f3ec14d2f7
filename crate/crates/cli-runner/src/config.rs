//! TOML run configuration: the system frame, where the basis comes from,
//! and the optimizer, bound, quadrature, and oracle knobs.

use std::path::{Path, PathBuf};

use coulomb_kernels::{Nucleus, SystemDefinition};
use quad_engine::QuadratureSpec;
use serde::{Deserialize, Serialize};
use spectral_bounds::ExchangeSymmetry;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub electrons: usize,
    pub nuclei: Vec<NucleusSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NucleusSection {
    pub charge: f64,
    pub position: [f64; 3],
}

/// Basis source: either `file` pointing at a stored basis set, or a
/// generated block keyed by `size`. `floating` enables nonzero shifts drawn
/// uniformly from the cube of half-width `shift_range`; `symmetrize` turns
/// on the two-electron exchange projection. `correlation_range` bounds the
/// pair-coupling strengths and defaults to `exponent_range`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    pub file: Option<PathBuf>,
    pub size: Option<usize>,
    pub seed: Option<u64>,
    pub exponent_range: Option<[f64; 2]>,
    pub correlation_range: Option<[f64; 2]>,
    pub shift_range: Option<f64>,
    #[serde(default)]
    pub symmetrize: bool,
    #[serde(default)]
    pub floating: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeSection {
    pub sweeps: usize,
    pub trials: usize,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        OptimizeSection {
            sweeps: 3,
            trials: 20,
        }
    }
}

/// `beta` is either the literal string `"ritz2"` (second Ritz value of the
/// assembled pencil) or an explicit spectral gap estimate in hartree.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaChoice {
    Explicit(f64),
    Named(BetaName),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaName {
    Ritz2,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub beta: Option<BetaChoice>,
    pub stevenson_alpha: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let spec = QuadratureSpec::default();
        QuadratureSection {
            rel_tol: spec.rel_tol,
            abs_tol: spec.abs_tol,
            max_subdivisions: spec.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            samples: 400_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub system: SystemSection,
    pub basis: BasisSection,
    #[serde(default)]
    pub optimize: OptimizeSection,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

/// Where the working basis comes from.
#[derive(Debug, Clone)]
pub enum BasisPlan {
    File(PathBuf),
    Generated {
        size: usize,
        seed: u64,
        exponent_range: (f64, f64),
        correlation_range: (f64, f64),
        shift_range: f64,
    },
}

/// Validated configuration with every CLI override already applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemDefinition,
    pub basis: BasisPlan,
    pub exchange: ExchangeSymmetry,
    pub optimize: OptimizeSection,
    pub beta: Option<f64>,
    pub stevenson_alpha: Option<f64>,
    pub quadrature: QuadratureSpec,
    pub oracle: OracleSection,
    pub threads: usize,
    pub echo: RawConfig,
}

pub fn load_config(path: &Path, seed: Option<u64>, threads: usize) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawConfig = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    resolve(raw, seed, threads)
}

fn positive_range(range: [f64; 2], what: &str) -> Result<(f64, f64), CliError> {
    let [lo, hi] = range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(CliError::Config(format!(
            "{what} must be a positive increasing pair (got [{lo}, {hi}])"
        )));
    }
    Ok((lo, hi))
}

fn resolve(mut raw: RawConfig, seed: Option<u64>, threads: usize) -> Result<RunConfig, CliError> {
    if let Some(seed) = seed {
        if raw.basis.size.is_some() {
            raw.basis.seed = Some(seed);
        }
        raw.oracle.seed = seed;
    }

    let nuclei = raw
        .system
        .nuclei
        .iter()
        .map(|n| Nucleus {
            charge: n.charge,
            position: n.position,
        })
        .collect();
    let system = SystemDefinition::new(raw.system.electrons, nuclei)
        .map_err(|e| CliError::Config(format!("[system] {e}")))?;

    let basis = match (&raw.basis.file, raw.basis.size) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "[basis] give either `file` or a generated block with `size`, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Config(
                "[basis] needs either `file` or a generated block with `size`".into(),
            ))
        }
        (Some(file), None) => {
            for key in [
                raw.basis.seed.is_some().then_some("seed"),
                raw.basis.exponent_range.is_some().then_some("exponent_range"),
                raw.basis
                    .correlation_range
                    .is_some()
                    .then_some("correlation_range"),
                raw.basis.shift_range.is_some().then_some("shift_range"),
            ]
            .into_iter()
            .flatten()
            {
                return Err(CliError::Config(format!(
                    "[basis] `{key}` applies to generated bases only, not `file`"
                )));
            }
            BasisPlan::File(file.clone())
        }
        (None, Some(size)) => {
            if size == 0 {
                return Err(CliError::Config("[basis] `size` must be positive".into()));
            }
            let exponent_range =
                positive_range(raw.basis.exponent_range.unwrap_or([1e-2, 1e2]), "[basis] exponent_range")?;
            let correlation_range = match raw.basis.correlation_range {
                Some(range) => positive_range(range, "[basis] correlation_range")?,
                None => exponent_range,
            };
            let shift_range = if raw.basis.floating {
                let r = raw.basis.shift_range.unwrap_or(1.0);
                if !(r > 0.0 && r.is_finite()) {
                    return Err(CliError::Config(
                        "[basis] floating bases need a positive `shift_range`".into(),
                    ));
                }
                r
            } else {
                if raw.basis.shift_range.is_some_and(|r| r != 0.0) {
                    return Err(CliError::Config(
                        "[basis] nonzero `shift_range` needs `floating = true`".into(),
                    ));
                }
                0.0
            };
            BasisPlan::Generated {
                size,
                seed: raw.basis.seed.unwrap_or(1),
                exponent_range,
                correlation_range,
                shift_range,
            }
        }
    };

    let exchange = if raw.basis.symmetrize {
        if raw.system.electrons != 2 {
            return Err(CliError::Config(format!(
                "[basis] symmetrize applies to two-electron systems only (got {})",
                raw.system.electrons
            )));
        }
        ExchangeSymmetry::PairSwap
    } else {
        ExchangeSymmetry::None
    };

    let beta = match raw.bounds.beta {
        None | Some(BetaChoice::Named(BetaName::Ritz2)) => None,
        Some(BetaChoice::Explicit(value)) => {
            if !value.is_finite() {
                return Err(CliError::Config("[bounds] beta must be finite".into()));
            }
            Some(value)
        }
    };

    let q = &raw.quadrature;
    if !(q.rel_tol > 0.0 && q.abs_tol > 0.0 && q.max_subdivisions > 0) {
        return Err(CliError::Config(
            "[quadrature] tolerances and max_subdivisions must be positive".into(),
        ));
    }
    let quadrature = QuadratureSpec {
        rel_tol: q.rel_tol,
        abs_tol: q.abs_tol,
        max_subdivisions: q.max_subdivisions,
        ..QuadratureSpec::default()
    };

    if raw.oracle.samples == 0 {
        return Err(CliError::Config("[oracle] samples must be positive".into()));
    }

    Ok(RunConfig {
        system,
        basis,
        exchange,
        optimize: raw.optimize.clone(),
        beta,
        stevenson_alpha: raw.bounds.stevenson_alpha,
        quadrature,
        oracle: raw.oracle.clone(),
        threads,
        echo: raw,
    })
}

/// Two-electron guard for the pipelines that assemble Ĥ².
pub fn require_two_electrons(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    let n = cfg.system.n_electrons();
    if n != 2 {
        return Err(CliError::Config(format!(
            "{what} needs exactly two electrons (UnsupportedElectronCount: got {n})"
        )));
    }
    Ok(())
}
