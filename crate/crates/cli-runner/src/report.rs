//! Machine-readable run reports. Every key is always present; numbers that
//! are unavailable or non-finite serialize as `null` with a matching note.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use spectral_bounds::{BetaSource, BoundsReport};

use crate::config::RawConfig;
use crate::CliError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One kernel-versus-oracle comparison row.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralCheck {
    pub name: String,
    pub pair: [usize; 2],
    pub kernel: f64,
    pub oracle: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub method: &'static str,
    pub pass: bool,
}

impl IntegralCheck {
    pub fn line(&self) -> String {
        format!(
            "{:<26} pair ({},{})  kernel {:>14.8e}  oracle {:>14.8e}  |delta| {:.3e} <= {:.3e}  {} [{}]",
            self.name,
            self.pair[0],
            self.pair[1],
            self.kernel,
            self.oracle,
            self.delta,
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" },
            self.method,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsSection {
    pub beta: Option<f64>,
    pub beta_source: &'static str,
    pub weinstein_lb: f64,
    /// Weinstein assumes the trial state is dominated by the ground state;
    /// the flag records that this was not verified.
    pub weinstein_caveat: bool,
    pub temple_lb: Option<f64>,
    pub temple_valid: bool,
    pub stevenson_alpha: Option<f64>,
    pub stevenson_lb: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    /// Echo of the resolved configuration; `null` when the command ran on
    /// built-in defaults without a config file.
    pub config: Option<RawConfig>,
    pub threads: usize,
    pub energy_upper: Option<f64>,
    pub variance: Option<f64>,
    pub variance_clamped: bool,
    pub bounds: Option<BoundsSection>,
    pub per_term_h2_pair: Option<[usize; 2]>,
    pub per_term_h2: Option<BTreeMap<&'static str, f64>>,
    pub trace: Option<Vec<f64>>,
    pub integrals: Option<Vec<IntegralCheck>>,
    pub timings: BTreeMap<&'static str, f64>,
    pub basis_file_path: Option<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, config: Option<RawConfig>, threads: usize) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command,
            config,
            threads,
            energy_upper: None,
            variance: None,
            variance_clamped: false,
            bounds: None,
            per_term_h2_pair: None,
            per_term_h2: None,
            trace: None,
            integrals: None,
            timings: BTreeMap::new(),
            basis_file_path: None,
            notes: Vec::new(),
        }
    }

    /// Stores a number, replacing a non-finite value by `null` plus a note.
    pub fn set_number(slot: &mut Option<f64>, value: f64, label: &str, notes: &mut Vec<String>) {
        if value.is_finite() {
            *slot = Some(value);
        } else {
            *slot = None;
            notes.push(format!("{label} was non-finite ({value}) and is reported as null"));
        }
    }

    pub fn absorb_bounds(&mut self, b: &BoundsReport) {
        let mut notes = std::mem::take(&mut self.notes);
        Report::set_number(&mut self.energy_upper, b.energy_upper, "energy_upper", &mut notes);
        Report::set_number(&mut self.variance, b.variance, "variance", &mut notes);
        self.variance_clamped = b.variance_clamped;
        if b.variance_clamped {
            notes.push("variance was a tiny negative roundoff value and was clamped to zero".into());
        }
        let mut beta = None;
        if b.beta.is_finite() {
            beta = Some(b.beta);
        } else {
            notes.push("no beta available: single Ritz value and no explicit beta given".into());
        }
        if !b.temple_valid {
            notes.push("Temple bound invalid: beta does not exceed the Rayleigh quotient".into());
        }
        self.bounds = Some(BoundsSection {
            beta,
            beta_source: match b.beta_source {
                BetaSource::SecondRitz => "ritz2",
                BetaSource::UserSupplied => "explicit",
            },
            weinstein_lb: b.weinstein_lb,
            weinstein_caveat: b.weinstein_caveat,
            temple_lb: b.temple_lb,
            temple_valid: b.temple_valid,
            stevenson_alpha: b.stevenson_alpha,
            stevenson_lb: b.stevenson_lb,
        });
        self.notes = notes;
    }

    pub fn write(&self, dir: &Path) -> Result<std::path::PathBuf, CliError> {
        let path = dir.join(format!("{}_report.json", self.command));
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Run(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Writes an optimization trace as two-column CSV.
pub fn write_trace_csv(dir: &Path, trace: &[f64]) -> Result<std::path::PathBuf, CliError> {
    let path = dir.join("trace.csv");
    let mut text = String::from("step,energy\n");
    for (step, energy) in trace.iter().enumerate() {
        text.push_str(&format!("{step},{energy:.15e}\n"));
    }
    std::fs::write(&path, text)
        .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
