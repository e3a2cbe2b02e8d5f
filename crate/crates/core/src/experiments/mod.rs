//! Figure reproductions and one-number queries driven by [`ExperimentConfig`].

pub mod config;
pub mod fig1;
pub mod fig3;
pub mod output;

pub use config::{Experiment, ExperimentConfig, Format, StateSpec, TimeUnit};
pub use fig1::run_fig1;
pub use fig3::{run_fig3, run_fig3_inset, Fig3Run};
pub use output::Table;

use crate::error::{Error, Result};
use crate::fock::{energy, FockPairState};
use crate::gaussian::fidelity;
use crate::info::{fock_grid, negativity, WignerField};

/// Result of a single-quantity query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Answer {
    pub value: f64,
    pub unit: Option<&'static str>,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.unit {
            Some(u) => write!(f, "{} {u}", self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

/// `eigen`: energy of `(k, ℓ)`. `fidelity`: `F(state, reference)`.
/// `coherence`: of `state`, in bits. `negativity`: of the mode marginal of
/// `(k, ℓ)` at `query.theta`.
pub fn query(config: &ExperimentConfig) -> Result<Answer> {
    config.validate()?;
    let plain = |value| Answer { value, unit: None };
    match config.experiment {
        config::Experiment::Eigen => Ok(plain(energy(config.k, config.l, &config.params()?))),
        config::Experiment::Fidelity => Ok(plain(fidelity(&config.state.build()?, &config.reference.build()?)?)),
        config::Experiment::Coherence => {
            Ok(Answer { value: config.state.build()?.coherence()?, unit: Some("bits") })
        }
        config::Experiment::Negativity => {
            let params = config.params()?;
            let state = FockPairState::new(config.k, config.l, params.with_gamma(1.0)?);
            let field = WignerField::fock_marginal(&state, config.theta, config.query_mode()?);
            let grid = fock_grid(&params, state.total_quanta(), config.grid_points)?;
            Ok(plain(negativity(&field, &grid, &config.policy())?))
        }
        other => Err(Error::Config(format!("'{}' is not a query", other.name()))),
    }
}
