//! Phase-space tools for two coupled harmonic oscillators: Fock-state Wigner
//! functions under the coupling flow, information measures computed from
//! them, and Gaussian open-system dynamics with a thermal bath on one mode.

pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod info;
pub mod open_dynamics;
pub mod quadrature;

pub use error::{Error, Result};
pub use fock::{energy, fock_wigner, stationary_wigner, FockPairState, Mode, OscillatorParams, PhasePoint};
pub use gaussian::{fidelity, thermal_state, GaussianState};
pub use info::{linear_entropy, mutual_information, negativity, WignerField};
pub use open_dynamics::{evolve_coupled, EvolutionRecord, IntegratorOptions, ThermalBath};
pub use quadrature::{gauss_hermite, laguerre, ConvergencePolicy, PhaseSpaceGrid, QuadratureRule};
