//! Mutual information and mode negativities of an evolving Fock pair
//! against the mixing angle `θ = γt`.

use std::thread;

use crate::error::Result;
use crate::fock::{FockPairState, Mode};
use crate::info::{fock_grid, fock_mutual_information, negativity, WignerField};
use crate::quadrature::gauss_hermite;

use super::config::ExperimentConfig;
use super::output::Table;

pub const COLUMNS: [&str; 4] = ["theta", "mutual_information", "negativity_mode1", "negativity_mode2"];

/// Sweep angles `0, Δθ, 2Δθ, …` up to `theta_max`.
pub fn angles(config: &ExperimentConfig) -> Vec<f64> {
    let n = (config.theta_max / config.theta_step + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * config.theta_step).collect()
}

pub fn run_fig1(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    let params = config.params()?;
    let state = FockPairState::new(config.k, config.l, params);
    let nodes = if config.hermite_nodes == 0 { state.default_hermite_nodes() } else { config.hermite_nodes };
    let rule = gauss_hermite(nodes)?;
    let grid = fock_grid(&params, state.total_quanta(), config.grid_points)?;
    let policy = config.policy();

    let row = |theta: f64| -> Result<Vec<f64>> {
        let t = theta / params.gamma();
        let mi = fock_mutual_information(&state, t, &rule)?;
        let d1 = negativity(&WignerField::fock_marginal(&state, t, Mode::First), &grid, &policy)?;
        let d2 = negativity(&WignerField::fock_marginal(&state, t, Mode::Second), &grid, &policy)?;
        Ok(vec![theta, mi, d1, d2])
    };

    let thetas = angles(config);
    let workers = match config.threads {
        0 => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        n => n,
    };
    let chunk = thetas.len().div_ceil(workers.max(1)).max(1);
    let results: Vec<Result<Vec<f64>>> = thread::scope(|s| {
        let handles: Vec<_> = thetas
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(|&th| row(th).map_err(|e| e.during(format!("theta = {th}")))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fig1 worker panicked")).collect()
    });

    let mut table = Table::new(COLUMNS.to_vec());
    for r in results {
        table.push(r?);
    }
    Ok(table)
}
