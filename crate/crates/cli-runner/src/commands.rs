//! The four subcommand pipelines.

use std::path::Path;
use std::time::Instant;

use coulomb_kernels::{Nucleus, SystemDefinition};
use ecg_core::write_basis_file;
use hsq_kernels::{assemble_h2_element, inv_rij_rpa_general, inv_rij_rpa_zero_shift};
use quad_engine::{dawson, erfi, QuadratureSpec};
use spectral_bounds::{bounds_report, build_matrices};

use crate::config::{require_two_electrons, RunConfig};
use crate::integrals::run_checks;
use crate::report::{write_trace_csv, IntegralCheck, Report};
use crate::{pipeline, CliError};

fn secs(from: Instant) -> f64 {
    from.elapsed().as_secs_f64()
}

/// Prints the check table, records it in the report, and converts the first
/// failing row into a numerical-failure exit.
fn settle_checks(
    rows: Vec<IntegralCheck>,
    report: &mut Report,
    dir: &Path,
) -> Result<(), CliError> {
    for row in &rows {
        println!("{}", row.line());
    }
    let failed = rows.iter().find(|r| !r.pass).cloned();
    let total = rows.len();
    let passed = rows.iter().filter(|r| r.pass).count();
    report.integrals = Some(rows);
    let path = report.write(dir)?;
    println!("{passed}/{total} checks passed; report written to {}", path.display());
    match failed {
        None => Ok(()),
        Some(row) => Err(CliError::Run(format!(
            "integral check failed: {} on pair ({},{}): |delta| {:.3e} > {:.3e}",
            row.name, row.pair[0], row.pair[1], row.delta, row.tolerance
        ))),
    }
}

pub fn cmd_integrals(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    require_two_electrons(cfg, "the integrals pipeline assembles H-squared and")?;
    let start = Instant::now();
    let mut report = Report::new("integrals", Some(cfg.echo.clone()), cfg.threads);
    let basis = pipeline::sample_basis(cfg, 3)?;
    report.timings.insert("basis_s", secs(start));

    let checks = Instant::now();
    let rows = run_checks(
        &cfg.system,
        &basis,
        &cfg.quadrature,
        cfg.oracle.samples,
        cfg.oracle.seed,
    )?;
    report.timings.insert("checks_s", secs(checks));
    report.timings.insert("total_s", secs(start));
    report
        .notes
        .push("energy, variance, and bounds are produced by the optimize and bounds subcommands".into());
    settle_checks(rows, &mut report, dir)
}

pub fn cmd_optimize(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    let start = Instant::now();
    let mut report = Report::new("optimize", Some(cfg.echo.clone()), cfg.threads);
    let (basis, trace) = pipeline::optimized_basis(cfg)?;
    report.timings.insert("optimize_s", secs(start));

    let basis_path = dir.join("basis.json");
    write_basis_file(&basis_path, &basis)
        .map_err(|e| CliError::Run(format!("cannot write {}: {e}", basis_path.display())))?;
    report.basis_file_path = Some(basis_path.display().to_string());

    if let Some(&last) = trace.last() {
        let mut notes = std::mem::take(&mut report.notes);
        Report::set_number(&mut report.energy_upper, last, "energy_upper", &mut notes);
        report.notes = notes;
    }
    let trace_path = write_trace_csv(dir, &trace)?;
    report.trace = Some(trace.clone());
    report
        .notes
        .push("variance and bounds are produced by the bounds subcommand".into());
    report.timings.insert("total_s", secs(start));
    let path = report.write(dir)?;

    println!(
        "optimized {} functions; ground energy {:.9} hartree over {} accepted steps",
        basis.len(),
        trace.last().copied().unwrap_or(f64::NAN),
        trace.len(),
    );
    println!(
        "basis written to {}; trace to {}; report to {}",
        basis_path.display(),
        trace_path.display(),
        path.display()
    );
    Ok(())
}

pub fn cmd_bounds(cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    require_two_electrons(cfg, "the bounds pipeline assembles H-squared and")?;
    let start = Instant::now();
    let mut report = Report::new("bounds", Some(cfg.echo.clone()), cfg.threads);
    let (basis, _) = pipeline::optimized_basis(cfg)?;
    report.timings.insert("basis_s", secs(start));

    let stage = Instant::now();
    let matrices = build_matrices(&cfg.system, &basis, &cfg.quadrature, cfg.threads, cfg.exchange)
        .map_err(|e| CliError::Run(format!("matrix assembly failed: {e}")))?;
    report.timings.insert("matrices_s", secs(stage));

    let stage = Instant::now();
    let bounds = bounds_report(&matrices, cfg.beta, cfg.stevenson_alpha)
        .map_err(|e| CliError::Run(format!("bounds evaluation failed: {e}")))?;
    report.absorb_bounds(&bounds);
    report.timings.insert("bounds_s", secs(stage));

    let pair = [0, 1.min(basis.len() - 1)];
    let breakdown = assemble_h2_element(&cfg.system, &basis[pair[0]], &basis[pair[1]], &cfg.quadrature)
        .map_err(|e| CliError::Run(format!("H-squared breakdown failed: {e}")))?;
    report.per_term_h2_pair = Some(pair);
    report.per_term_h2 = Some(breakdown.terms.iter().copied().collect());
    report
        .notes
        .push("per_term_h2 is the raw unnormalized element of the designated pair".into());
    report.timings.insert("total_s", secs(start));
    let path = report.write(dir)?;

    println!("energy_upper = {:.9} hartree", bounds.energy_upper);
    println!(
        "variance     = {:.6e}{}",
        bounds.variance,
        if bounds.variance_clamped {
            "  (clamped from tiny negative roundoff)"
        } else {
            ""
        }
    );
    println!("weinstein_lb = {:.9}  (caveat: assumes ground-state dominance)", bounds.weinstein_lb);
    match (bounds.temple_lb, bounds.temple_valid) {
        (Some(lb), true) => {
            println!(
                "temple_lb    = {lb:.9}  (beta = {:.9}, {})",
                bounds.beta,
                match bounds.beta_source {
                    spectral_bounds::BetaSource::SecondRitz => "second Ritz value",
                    spectral_bounds::BetaSource::UserSupplied => "user-supplied",
                }
            );
            println!(
                "interval     = [{lb:.9}, {:.9}]  (width {:.3e})",
                bounds.energy_upper,
                bounds.energy_upper - lb
            );
        }
        _ => {
            println!("temple_lb    = unavailable (beta does not exceed the Rayleigh quotient)");
            println!(
                "interval     = [{:.9}, {:.9}]  (Weinstein fallback, width {:.3e})",
                bounds.weinstein_lb,
                bounds.energy_upper,
                bounds.energy_upper - bounds.weinstein_lb
            );
        }
    }
    if let (Some(alpha), Some(lb)) = (bounds.stevenson_alpha, bounds.stevenson_lb) {
        println!("stevenson_lb = {lb:.9}  (alpha = {alpha:.9})");
    }
    println!("report written to {}", path.display());
    Ok(())
}

/// Extra verify-only rows: the shifted double-Coulomb kernel against its
/// zero-shift closed form, and the Dawson/erfi identity.
fn verify_extras(
    basis: &[ecg_core::EcgBasisFunction],
    quad: &QuadratureSpec,
) -> Result<Vec<IntegralCheck>, CliError> {
    let mut rows = Vec::new();
    let origin = [0.0; 3];
    for k in 0..basis.len().min(2) {
        for l in k..basis.len().min(2) {
            let pp = ecg_core::pair_product(&basis[k], &basis[l])
                .map_err(|e| CliError::Run(format!("pair product failed: {e}")))?;
            let general = inv_rij_rpa_general(&pp, 0, 1, 0, origin, quad)
                .map_err(|e| CliError::Run(format!("rijrpa_general failed: {e}")))?;
            let closed = inv_rij_rpa_zero_shift(pp.a_kl(), 0, 1, 0)
                .map_err(|e| CliError::Run(format!("rijrpa_zero_shift failed: {e}")))?;
            let delta = (general - closed).abs();
            let tolerance = 1e-7 * closed.abs().max(1.0);
            rows.push(IntegralCheck {
                name: "rijrpa_zero_shift_limit".into(),
                pair: [k, l],
                kernel: general,
                oracle: closed,
                delta,
                tolerance,
                method: "differential",
                pass: delta <= tolerance,
            });
        }
    }

    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for step in 0..=600 {
        let x = 0.01 * step as f64;
        let lhs = dawson(x);
        let rhs = 0.5 * std::f64::consts::PI.sqrt() * (-x * x).exp() * erfi(x);
        let delta = (lhs - rhs).abs() / lhs.abs().max(1.0);
        if delta > worst.2 {
            worst = (lhs, rhs, delta);
        }
    }
    rows.push(IntegralCheck {
        name: "dawson_erfi_identity".into(),
        pair: [0, 0],
        kernel: worst.0,
        oracle: worst.1,
        delta: worst.2,
        tolerance: 1e-12,
        method: "differential",
        pass: worst.2 <= 1e-12,
    });
    Ok(rows)
}

/// Full oracle regression over canonical systems; independent of any basis
/// or system configured for the other subcommands.
pub fn cmd_verify(cfg: Option<&RunConfig>, threads: usize, dir: &Path) -> Result<(), CliError> {
    let quad = cfg.map_or_else(QuadratureSpec::default, |c| c.quadrature);
    let samples = cfg.map_or(400_000, |c| c.oracle.samples);
    let seed = cfg.map_or(1, |c| c.oracle.seed);

    let helium = SystemDefinition::new(
        2,
        vec![Nucleus {
            charge: 2.0,
            position: [0.0; 3],
        }],
    )
    .map_err(|e| CliError::Run(e.to_string()))?;
    let dihydrogen = SystemDefinition::new(
        2,
        vec![
            Nucleus {
                charge: 1.0,
                position: [0.0, 0.0, 0.7],
            },
            Nucleus {
                charge: 1.0,
                position: [0.0, 0.0, -0.7],
            },
        ],
    )
    .map_err(|e| CliError::Run(e.to_string()))?;

    let cases: [(&str, &SystemDefinition, f64); 3] = [
        ("helium_ecg", &helium, 0.0),
        ("helium_fecg", &helium, 0.5),
        ("dihydrogen_fecg", &dihydrogen, 0.4),
    ];

    let start = Instant::now();
    let mut report = Report::new("verify", cfg.map(|c| c.echo.clone()), threads);
    let mut rows = Vec::new();
    for (label, sys, shift) in cases {
        println!("-- {label} --");
        let basis =
            pipeline::draw_functions(sys, 3, seed.wrapping_add(1), (0.05, 4.0), (0.05, 2.0), shift)?;
        let mut case_rows = run_checks(sys, &basis, &quad, samples, seed)?;
        if shift == 0.0 {
            case_rows.extend(verify_extras(&basis, &quad)?);
        }
        for row in &mut case_rows {
            row.name = format!("{label}/{}", row.name);
            println!("{}", row.line());
        }
        rows.extend(case_rows);
    }
    report.timings.insert("total_s", secs(start));
    report
        .notes
        .push("verify runs canonical systems; the configured system and basis are not used".into());

    let failed = rows.iter().find(|r| !r.pass).cloned();
    let total = rows.len();
    let passed = rows.iter().filter(|r| r.pass).count();
    report.integrals = Some(rows);
    let path = report.write(dir)?;
    println!("{passed}/{total} checks passed; report written to {}", path.display());
    match failed {
        None => Ok(()),
        Some(row) => Err(CliError::Run(format!(
            "oracle regression failed: {} on pair ({},{}): |delta| {:.3e} > {:.3e}",
            row.name, row.pair[0], row.pair[1], row.delta, row.tolerance
        ))),
    }
}
