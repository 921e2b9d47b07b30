//! Experiment configuration files.
//!
//! An experiment JSON describes one sweep of the interaction parameter `γ₁`:
//!
//! ```json
//! {
//!   "model_template": {"family": "strauss", "gamma": [0.5], "radii": [0.1]},
//!   "beta": 100.0,
//!   "gamma1_grid": [0.0, 0.25, 0.5, 0.75, 1.0],
//!   "mc": {"n_replicates": 200, "n_steps": 100000, "seed": 1},
//!   "output_path": "sweep.csv"
//! }
//! ```
//!
//! `gamma1_grid` defaults to 0..1 in steps of 0.05 (Diggle-Gratton starts at
//! 0.05); `mc` is optional — without it the sweep carries no Monte-Carlo
//! columns. The `model_template`'s `gamma[0]` entry is a placeholder replaced
//! by each grid value.

use crate::CliError;
use pipp::models::Family;
use pipp::{PairwiseInteraction, SimConfig};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub model_template: PairwiseInteraction,
    pub beta: f64,
    #[serde(default)]
    pub gamma1_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub mc: Option<McSettings>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSettings {
    #[serde(default = "default_replicates")]
    pub n_replicates: u32,
    #[serde(default = "default_steps")]
    pub n_steps: u64,
    #[serde(default)]
    pub seed: u64,
    /// Simulation margin around the unit square; defaults to `2R`.
    #[serde(default)]
    pub extension: Option<f64>,
}

fn default_replicates() -> u32 {
    1000
}

fn default_steps() -> u64 {
    1_000_000
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let spec: ExperimentSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid experiment config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(CliError::Config(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if let Some(grid) = &self.gamma1_grid {
            if grid.is_empty() {
                return Err(CliError::Config("gamma1_grid must not be empty".into()));
            }
            let in_range = grid
                .iter()
                .all(|g| g.is_finite() && (0.0..=1.0).contains(g));
            let ascending = grid.windows(2).all(|w| w[0] < w[1]);
            if !in_range || !ascending {
                return Err(CliError::Config(
                    "gamma1_grid must be strictly ascending with values in [0,1]".into(),
                ));
            }
        }
        if let Some(mc) = &self.mc {
            if mc.n_replicates < 1 || mc.n_steps < 1 {
                return Err(CliError::Config(
                    "mc.n_replicates and mc.n_steps must be at least 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// The γ₁ grid, explicit or defaulted (step 0.05; Diggle-Gratton sweeps
    /// start at 0.05 rather than 0).
    pub fn grid(&self) -> Vec<f64> {
        match &self.gamma1_grid {
            Some(grid) => grid.clone(),
            None => default_grid(self.model_template.family()),
        }
    }

    /// Simulation configuration for one grid value, or `None` without an
    /// `mc` block. Row seeds are derived deterministically from the master
    /// seed and the row index so rows are independent but replayable.
    pub fn sim_config(
        &self,
        model: &PairwiseInteraction,
        row: usize,
        seed_override: Option<u64>,
    ) -> Option<SimConfig> {
        let mc = self.mc.as_ref()?;
        let master = seed_override.unwrap_or(mc.seed);
        let mut config = SimConfig::new(model.clone(), self.beta)
            .with_steps(mc.n_steps)
            .with_replicates(mc.n_replicates)
            .with_seed(pipp::sim::replicate_seed(master, row as u64));
        if let Some(extension) = mc.extension {
            config = config.with_extension(extension);
        }
        Some(config)
    }
}

pub fn default_grid(family: Family) -> Vec<f64> {
    let start = if family == Family::DiggleGratton {
        1
    } else {
        0
    };
    (start..=20).map(|i| f64::from(i) / 20.0).collect()
}

/// Loads and validates a model configuration file.
pub fn load_model(path: &Path) -> Result<PairwiseInteraction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid model config: {e}")))
}
