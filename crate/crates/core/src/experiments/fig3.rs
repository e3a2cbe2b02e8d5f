//! Fidelity to the bath's thermal state and coherence of mode 1 while the
//! coupled pair relaxes.

use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::error::Result;
use crate::gaussian::GaussianState;
use crate::open_dynamics::{backflow_intervals, evolve_coupled, increase_intervals, EvolutionRecord, IntegratorOptions};

use super::config::{ExperimentConfig, TimeUnit};
use super::output::{intervals_json, Table};

pub const COLUMNS: [&str; 4] = ["t", "fidelity", "coherence_normalized", "coherence_raw"];

#[derive(Debug, Clone)]
pub struct Fig3Run {
    pub gamma: f64,
    pub table: Table,
    pub record: EvolutionRecord,
    /// Windows, on the table's time axis, where the fidelity falls.
    pub backflow: Vec<(f64, f64)>,
    /// Windows where the raw coherence rises.
    pub coherence_rises: Vec<(f64, f64)>,
}

impl Fig3Run {
    pub fn summary(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("gamma".into(), Value::from(self.gamma));
        m.insert("backflow_intervals".into(), intervals_json(&self.backflow));
        m.insert("coherence_increase_intervals".into(), intervals_json(&self.coherence_rises));
        m
    }

    pub fn summary_text(&self) -> String {
        let fmt = |v: &[(f64, f64)]| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.iter().map(|(a, b)| format!("[{a}, {b}]")).collect::<Vec<_>>().join(" ")
            }
        };
        format!(
            "gamma = {}\nbackflow intervals: {}\ncoherence increase intervals: {}\n",
            self.gamma,
            fmt(&self.backflow),
            fmt(&self.coherence_rises)
        )
    }
}

/// Physical time per unit of the output time axis.
pub fn time_scale(config: &ExperimentConfig) -> f64 {
    match config.time_unit {
        TimeUnit::Decay => 1.0 / config.decay_rate,
        TimeUnit::Omega => 1.0 / config.omega,
    }
}

pub fn initial_state(config: &ExperimentConfig) -> Result<GaussianState> {
    let v = config.initial_variance * config.hbar;
    GaussianState::with_hbar(config.initial_means.to_vec(), DMatrix::identity(4, 4) * v, config.hbar)
}

/// Main run at the configured γ.
pub fn run_fig3(config: &ExperimentConfig) -> Result<Fig3Run> {
    config.validate()?;
    run_with_gamma(config, config.gamma)
}

/// The uncoupled reference run shown as the figure inset.
pub fn run_fig3_inset(config: &ExperimentConfig) -> Result<Fig3Run> {
    config.validate()?;
    run_with_gamma(config, 0.0)
}

fn run_with_gamma(config: &ExperimentConfig, gamma: f64) -> Result<Fig3Run> {
    let params = config.params()?.with_gamma(gamma)?;
    let bath = config.bath()?;
    let scale = time_scale(config);
    let n = (config.time_max / config.time_step + 1e-9).floor() as usize;
    let axis: Vec<f64> = (0..=n).map(|i| i as f64 * config.time_step).collect();
    let physical: Vec<f64> = axis.iter().map(|s| s * scale).collect();

    let record = evolve_coupled(
        &initial_state(config)?,
        &params,
        &bath,
        &physical,
        &IntegratorOptions { max_step: config.max_step },
    )?;

    let normalized = record.normalized_coherence();
    let mut table = Table::new(COLUMNS.to_vec());
    for i in 0..axis.len() {
        table.push(vec![axis[i], record.fidelity_track[i], normalized[i], record.coherence_track[i]]);
    }
    let backflow = backflow_intervals(&axis, &record.fidelity_track)?;
    let coherence_rises = increase_intervals(&axis, &record.coherence_track);
    Ok(Fig3Run { gamma, table, record, backflow, coherence_rises })
}
