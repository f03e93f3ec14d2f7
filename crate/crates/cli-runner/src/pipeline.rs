//! Basis acquisition shared by the subcommands: load a stored basis set,
//! draw unoptimized sample functions, or run the stochastic optimizer.

use coulomb_kernels::SystemDefinition;
use ecg_core::{read_basis_file, EcgBasisFunction};
use matkit::{Matrix, SpdMatrix};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use spectral_bounds::{stochastic_optimize, OptimizeConfig};

use crate::config::{BasisPlan, RunConfig};
use crate::CliError;

/// Loads the configured basis file and checks it against the system frame.
pub fn load_basis(cfg: &RunConfig, path: &std::path::Path) -> Result<Vec<EcgBasisFunction>, CliError> {
    let basis = read_basis_file(path)
        .map_err(|e| CliError::Config(format!("basis file {}: {e}", path.display())))?;
    let n = cfg.system.n_electrons();
    if basis.iter().any(|f| f.n_electrons() != n) {
        return Err(CliError::Config(format!(
            "basis file {} holds functions for a different electron count than the system ({n})",
            path.display()
        )));
    }
    Ok(basis)
}

/// Produces the working basis: a stored file is refined in place for the
/// configured number of sweeps, a generated plan is grown from scratch.
/// Returns the basis and the ground-energy trace (one entry per accepted
/// step; empty only when there was nothing to optimize).
pub fn optimized_basis(cfg: &RunConfig) -> Result<(Vec<EcgBasisFunction>, Vec<f64>), CliError> {
    let (initial, opt_cfg) = match &cfg.basis {
        BasisPlan::File(path) => {
            let basis = load_basis(cfg, path)?;
            let opt_cfg = OptimizeConfig {
                target_size: basis.len(),
                trials: cfg.optimize.trials,
                sweeps: cfg.optimize.sweeps,
                exchange: cfg.exchange,
                seed: cfg.oracle.seed,
                threads: cfg.threads,
                ..OptimizeConfig::default()
            };
            (basis, opt_cfg)
        }
        BasisPlan::Generated {
            size,
            seed,
            exponent_range,
            correlation_range,
            shift_range,
        } => {
            let opt_cfg = OptimizeConfig {
                target_size: *size,
                trials: cfg.optimize.trials,
                sweeps: cfg.optimize.sweeps,
                exponent_range: *exponent_range,
                correlation_range: *correlation_range,
                shift_range: *shift_range,
                exchange: cfg.exchange,
                seed: *seed,
                threads: cfg.threads,
            };
            (Vec::new(), opt_cfg)
        }
    };
    let outcome = stochastic_optimize(&cfg.system, &initial, &opt_cfg)
        .map_err(|e| CliError::Run(format!("optimization failed: {e}")))?;
    Ok((outcome.basis, outcome.trace))
}

/// Draws unoptimized sample functions from the generated-plan distribution,
/// for kernel-versus-oracle sweeps that need a basis but not a good one.
pub fn sample_basis(cfg: &RunConfig, count: usize) -> Result<Vec<EcgBasisFunction>, CliError> {
    match &cfg.basis {
        BasisPlan::File(path) => load_basis(cfg, path),
        BasisPlan::Generated {
            seed,
            exponent_range,
            correlation_range,
            shift_range,
            ..
        } => draw_functions(
            &cfg.system,
            count,
            *seed,
            *exponent_range,
            *correlation_range,
            *shift_range,
        ),
    }
}

pub fn draw_functions(
    sys: &SystemDefinition,
    count: usize,
    seed: u64,
    exponent_range: (f64, f64),
    correlation_range: (f64, f64),
    shift_range: f64,
) -> Result<Vec<EcgBasisFunction>, CliError> {
    let n = sys.n_electrons();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| -> f64 {
        if hi > lo {
            rng.gen_range(lo.ln()..hi.ln()).exp()
        } else {
            lo
        }
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            a.set(i, i, log_uniform(&mut rng, exponent_range));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = log_uniform(&mut rng, correlation_range);
                a.set(i, i, a.get(i, i) + alpha);
                a.set(j, j, a.get(j, j) + alpha);
                a.set(i, j, a.get(i, j) - alpha);
                a.set(j, i, a.get(j, i) - alpha);
            }
        }
        let s = if shift_range > 0.0 {
            (0..3 * n)
                .map(|_| rng.gen_range(-shift_range..shift_range))
                .collect()
        } else {
            vec![0.0; 3 * n]
        };
        let spd = SpdMatrix::from_matrix(a)
            .map_err(|e| CliError::Run(format!("drawn exponent matrix rejected: {e}")))?;
        out.push(
            EcgBasisFunction::new(spd, s)
                .map_err(|e| CliError::Run(format!("drawn basis function rejected: {e}")))?,
        );
    }
    Ok(out)
}
