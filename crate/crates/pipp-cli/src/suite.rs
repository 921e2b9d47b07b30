//! The 14-configuration study suite.
//!
//! Five Strauss setups, one Strauss hard-core, four Diggle-Gratton and four
//! piecewise setups, each swept over γ₁ with Monte-Carlo validation. The
//! full-scale protocol (scale 1.0) uses 10^6 chain steps and 1000 or 10000
//! replicates per grid value; `scale` shrinks both for desk-scale runs.
//! Configurations are isolated: one failure is recorded in the manifest and
//! the rest still run.

use crate::config::{default_grid, ExperimentSpec, McSettings};
use crate::sweep::{run_sweep, write_csv};
use crate::{figure, CliError};
use pipp::sim::replicate_seed;
use pipp::PairwiseInteraction;
use std::path::Path;
use std::time::Instant;

pub struct SuiteConfig {
    pub name: &'static str,
    pub beta: f64,
    pub replicates_full: u32,
    pub template: fn() -> PairwiseInteraction,
}

const FULL_STEPS: f64 = 1e6;

/// The study configurations, in presentation order.
pub fn configurations() -> Vec<SuiteConfig> {
    fn strauss(r: f64) -> PairwiseInteraction {
        PairwiseInteraction::strauss(0.5, r).expect("valid template")
    }
    fn piecewise(gamma2: f64, hardcore: f64) -> PairwiseInteraction {
        PairwiseInteraction::piecewise_strauss_hard_core(
            vec![0.5, gamma2],
            hardcore,
            vec![0.05, 0.1],
        )
        .expect("valid template")
    }
    vec![
        SuiteConfig {
            name: "S-R005-b100",
            beta: 100.0,
            replicates_full: 10_000,
            template: || strauss(0.05),
        },
        SuiteConfig {
            name: "S-R01-b100",
            beta: 100.0,
            replicates_full: 10_000,
            template: || strauss(0.1),
        },
        SuiteConfig {
            name: "S-R01-b50",
            beta: 50.0,
            replicates_full: 10_000,
            template: || strauss(0.1),
        },
        SuiteConfig {
            name: "S-R015-b50",
            beta: 50.0,
            replicates_full: 10_000,
            template: || strauss(0.15),
        },
        SuiteConfig {
            name: "S-R005-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || strauss(0.05),
        },
        SuiteConfig {
            name: "SHC-d0025-R005-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || {
                PairwiseInteraction::strauss_hard_core(0.5, 0.025, 0.05).expect("valid template")
            },
        },
        SuiteConfig {
            name: "DG-R0025-b200",
            beta: 200.0,
            replicates_full: 10_000,
            template: || PairwiseInteraction::diggle_gratton(0.5, 0.025).expect("valid template"),
        },
        SuiteConfig {
            name: "DG-R005-b200",
            beta: 200.0,
            replicates_full: 10_000,
            template: || PairwiseInteraction::diggle_gratton(0.5, 0.05).expect("valid template"),
        },
        SuiteConfig {
            name: "DG-R0075-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || PairwiseInteraction::diggle_gratton(0.5, 0.075).expect("valid template"),
        },
        SuiteConfig {
            name: "DG-R015-b50",
            beta: 50.0,
            replicates_full: 10_000,
            template: || PairwiseInteraction::diggle_gratton(0.5, 0.15).expect("valid template"),
        },
        SuiteConfig {
            name: "PS-g2-05-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || piecewise(0.5, 0.0),
        },
        SuiteConfig {
            name: "PSHC-g2-05-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || piecewise(0.5, 0.025),
        },
        SuiteConfig {
            name: "PS-g2-0-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || piecewise(0.0, 0.0),
        },
        SuiteConfig {
            name: "PSHC-g2-0-b200",
            beta: 200.0,
            replicates_full: 1_000,
            template: || piecewise(0.0, 0.025),
        },
    ]
}

/// Runs the whole suite into `out_dir`; returns the number of failed
/// configurations.
pub fn run(out_dir: &Path, scale: f64, seed: u64, no_mc: bool) -> Result<usize, CliError> {
    assert!(scale > 0.0 && scale <= 1.0);
    std::fs::create_dir_all(out_dir)?;
    let n_steps = ((FULL_STEPS * scale).round() as u64).max(1);
    let mut entries = Vec::new();
    let mut failures = 0_usize;

    for (index, config) in configurations().into_iter().enumerate() {
        let template = (config.template)();
        let replicates = ((f64::from(config.replicates_full) * scale).round() as u32).max(1);
        let config_seed = replicate_seed(seed, index as u64);
        let spec = ExperimentSpec {
            model_template: template.clone(),
            beta: config.beta,
            gamma1_grid: Some(default_grid(template.family())),
            mc: if no_mc {
                None
            } else {
                Some(McSettings {
                    n_replicates: replicates,
                    n_steps,
                    seed: config_seed,
                    extension: None,
                })
            },
            output_path: None,
        };
        let started = Instant::now();
        let status = run_one(&spec, out_dir, config.name);
        let runtime = started.elapsed().as_secs_f64();
        let status_text = match &status {
            Ok(()) => "ok".to_string(),
            Err(e) => {
                failures += 1;
                format!("error: {e}")
            }
        };
        eprintln!(
            "[{:>2}/14] {:<22} {:>7.1}s  {}",
            index + 1,
            config.name,
            runtime,
            status_text
        );
        entries.push(serde_json::json!({
            "name": config.name,
            "beta": config.beta,
            "model_template": template,
            "n_replicates": if no_mc { 0 } else { replicates },
            "n_steps": if no_mc { 0 } else { n_steps },
            "seed": config_seed,
            "runtime_s": runtime,
            "status": status_text,
        }));
    }

    let manifest = serde_json::json!({
        "scale": scale,
        "seed": seed,
        "mc": !no_mc,
        "configurations": entries,
    });
    std::fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
    )?;
    Ok(failures)
}

fn run_one(spec: &ExperimentSpec, out_dir: &Path, name: &str) -> Result<(), CliError> {
    let rows = run_sweep(spec, None, false)?;
    let csv_path = out_dir.join(format!("{name}.csv"));
    write_csv(&rows, &csv_path)?;
    let svg = figure::render(&[(name.to_string(), rows)]);
    std::fs::write(out_dir.join(format!("{name}.svg")), svg)?;
    Ok(())
}
