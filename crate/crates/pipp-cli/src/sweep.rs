//! Sweep execution and the CSV table format.
//!
//! One row per γ₁ grid value. Column layout (exact header):
//! `gamma1,beta,G,kappa,lambda_ps,lambda_dpp[,mc_mean,mc_se,mc_q1,mc_median,mc_q3]`
//! with every number printed at 10 significant digits, so identical runs are
//! byte-identical. Files are written to a temporary sibling and renamed into
//! place, so a crashed run never leaves a torn table behind.

use crate::config::ExperimentSpec;
use crate::CliError;
use pipp::approx::approximate;
use pipp::quadrature::summarize;
use pipp::sim::estimate_intensity;
use std::path::Path;

pub const BASE_HEADER: &str = "gamma1,beta,G,kappa,lambda_ps,lambda_dpp";
pub const MC_HEADER: &str = "mc_mean,mc_se,mc_q1,mc_median,mc_q3";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma1: f64,
    pub beta: f64,
    pub g: f64,
    pub kappa: f64,
    pub lambda_ps: f64,
    pub lambda_dpp: f64,
    pub mc: Option<McColumns>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McColumns {
    pub mean: f64,
    pub se: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Runs the sweep described by `spec`: solves both approximations per grid
/// value and, when an `mc` block is present (and not suppressed), estimates
/// the Monte-Carlo intensity as well.
pub fn run_sweep(
    spec: &ExperimentSpec,
    seed_override: Option<u64>,
    no_mc: bool,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for (index, gamma1) in spec.grid().into_iter().enumerate() {
        let model = spec
            .model_template
            .with_gamma1(gamma1)
            .map_err(|e| CliError::Config(format!("gamma1 = {gamma1}: {e}")))?;
        let summary = summarize(&model)?;
        let approx = approximate(spec.beta, &summary);
        let mc = if no_mc {
            None
        } else {
            spec.sim_config(&model, index, seed_override).map(|config| {
                let estimate = estimate_intensity(&config);
                McColumns {
                    mean: estimate.mean_intensity,
                    se: estimate.std_error,
                    q1: estimate.quartiles.0,
                    median: estimate.quartiles.1,
                    q3: estimate.quartiles.2,
                }
            })
        };
        rows.push(SweepRow {
            gamma1,
            beta: spec.beta,
            g: summary.g,
            kappa: summary.kappa,
            lambda_ps: approx.lambda_ps,
            lambda_dpp: approx.lambda_dpp,
            mc,
        });
    }
    Ok(rows)
}

/// 10-significant-digit rendering used for every CSV number.
pub fn fmt10(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let with_mc = rows.iter().any(|r| r.mc.is_some());
    let mut out = String::from(BASE_HEADER);
    if with_mc {
        out.push(',');
        out.push_str(MC_HEADER);
    }
    out.push('\n');
    for row in rows {
        let mut fields = vec![
            fmt10(row.gamma1),
            fmt10(row.beta),
            fmt10(row.g),
            fmt10(row.kappa),
            fmt10(row.lambda_ps),
            fmt10(row.lambda_dpp),
        ];
        if with_mc {
            let mc = row
                .mc
                .as_ref()
                .expect("all rows of an MC sweep carry MC columns");
            fields.extend([
                fmt10(mc.mean),
                fmt10(mc.se),
                fmt10(mc.q1),
                fmt10(mc.median),
                fmt10(mc.q3),
            ]);
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Write-then-rename so partially written tables never occupy the target path.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, to_csv(rows))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Parses a sweep CSV back into rows, verifying the schema.
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        .clone();
    let base: Vec<&str> = BASE_HEADER.split(',').collect();
    let full: Vec<&str> = base.iter().copied().chain(MC_HEADER.split(',')).collect();
    let with_mc = if headers.iter().eq(base.iter().copied()) {
        false
    } else if headers.iter().eq(full.iter().copied()) {
        true
    } else {
        return Err(CliError::Config(format!(
            "{}: header does not match the sweep schema",
            path.display()
        )));
    };

    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .ok_or_else(|| CliError::Config(format!("row {line}: missing field {i}")))?
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("row {line}: {e}")))
        };
        let mc = if with_mc {
            Some(McColumns {
                mean: field(6)?,
                se: field(7)?,
                q1: field(8)?,
                median: field(9)?,
                q3: field(10)?,
            })
        } else {
            None
        };
        rows.push(SweepRow {
            gamma1: field(0)?,
            beta: field(1)?,
            g: field(2)?,
            kappa: field(3)?,
            lambda_ps: field(4)?,
            lambda_dpp: field(5)?,
            mc,
        });
    }
    Ok(rows)
}
