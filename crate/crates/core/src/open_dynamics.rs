//! Dissipative Gaussian dynamics of the coupled oscillators with a thermal
//! bath attached to mode 1 only.
//!
//! First moments and covariance obey
//!
//! ```text
//! ḋ = A d,      σ̇ = A σ + σ Aᵀ + D
//! ```
//!
//! where `A` is the Hamiltonian flow matrix plus damping `-Γ/2` on mode 1
//! and `D = Γ(2m̄ + 1)` on mode 1's block.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::fock::{Mode, OscillatorParams};
use crate::gaussian::{fidelity, thermal_state, GaussianState};

/// Markovian thermal reservoir: decay rate `Γ` and mean occupation `m̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalBath {
    decay_rate: f64,
    mean_photons: f64,
}

impl ThermalBath {
    /// `decay_rate = 0` is accepted and describes the closed system.
    pub fn new(decay_rate: f64, mean_photons: f64) -> Result<Self> {
        if !(decay_rate >= 0.0 && decay_rate.is_finite()) {
            return Err(Error::invalid(format!("decay rate must be >= 0, got {decay_rate}")));
        }
        if !(mean_photons >= 0.0 && mean_photons.is_finite()) {
            return Err(Error::invalid(format!("bath photon number must be >= 0, got {mean_photons}")));
        }
        Ok(Self { decay_rate, mean_photons })
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    /// State every bath-coupled mode relaxes to.
    pub fn asymptotic_state(&self) -> GaussianState {
        thermal_state(self.mean_photons).expect("validated photon number")
    }
}

/// Closed-form single-mode thermalization:
/// `σ(t) = e^{-Γt} σ(0) + (1 - e^{-Γt})(2m̄ + 1) I`, `d(t) = e^{-Γt/2} d(0)`.
pub fn thermalize_closed_form(state: &GaussianState, bath: &ThermalBath, t: f64) -> Result<GaussianState> {
    if state.modes() != 1 {
        return Err(Error::invalid("closed-form thermalization is single-mode"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    let decay = (-bath.decay_rate * t).exp();
    let target = (2.0 * bath.mean_photons + 1.0) * state.hbar();
    let cov = state.covariance() * decay + DMatrix::identity(2, 2) * ((1.0 - decay) * target);
    let means = state.means() * (-0.5 * bath.decay_rate * t).exp();
    GaussianState::with_hbar(means.iter().copied().collect(), cov, state.hbar())
}

/// Drift and diffusion matrices in the ordering `(q1, p1, q2, p2)`.
pub fn drift_and_diffusion(params: &OscillatorParams, bath: &ThermalBath) -> (Matrix4<f64>, Matrix4<f64>) {
    let two_a2 = 1.0 / params.mass();
    let two_b2 = params.mass() * params.omega() * params.omega();
    let g = params.gamma();
    let half = 0.5 * bath.decay_rate;
    #[rustfmt::skip]
    let drift = Matrix4::new(
        -half,  two_a2,  g,      0.0,
        -two_b2, -half,  0.0,    g,
        -g,      0.0,    0.0,    two_a2,
        0.0,    -g,     -two_b2, 0.0,
    );
    let noise = bath.decay_rate * (2.0 * bath.mean_photons + 1.0) * params.hbar();
    let diffusion = Matrix4::from_diagonal(&Vector4::new(noise, noise, 0.0, 0.0));
    (drift, diffusion)
}

/// Time series of a two-mode Gaussian evolution with mode-1 witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    pub states: Vec<GaussianState>,
    /// Fidelity of the reduced mode-1 state with the bath's thermal state.
    pub fidelity_track: Vec<f64>,
    /// Coherence (bits) of the reduced mode-1 state.
    pub coherence_track: Vec<f64>,
    pub backflow_intervals: Vec<(f64, f64)>,
}

impl EvolutionRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `C(t)/C(0)`.
    pub fn normalized_coherence(&self) -> Vec<f64> {
        match self.coherence_track.first() {
            Some(&c0) if c0 > 0.0 => self.coherence_track.iter().map(|c| c / c0).collect(),
            _ => vec![0.0; self.coherence_track.len()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Largest RK4 step; must not exceed `min(0.01/ω, 0.01/Γ)`.
    pub max_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { max_step: 0.01 }
    }
}

/// Integrates the moment equations with classical RK4 and records the
/// reduced mode-1 witnesses on `t_grid`.
pub fn evolve_coupled(
    initial: &GaussianState,
    params: &OscillatorParams,
    bath: &ThermalBath,
    t_grid: &[f64],
    options: &IntegratorOptions,
) -> Result<EvolutionRecord> {
    if initial.modes() != 2 {
        return Err(Error::invalid("coupled evolution needs a two-mode state"));
    }
    if initial.hbar() != params.hbar() {
        return Err(Error::invalid("state and oscillator use different hbar"));
    }
    match t_grid.first() {
        Some(&t0) if t0 == 0.0 => {}
        _ => return Err(Error::invalid("time grid must start at 0")),
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid must be strictly increasing"));
    }
    let mut limit = 0.01 / params.omega();
    if bath.decay_rate > 0.0 {
        limit = limit.min(0.01 / bath.decay_rate);
    }
    if !(options.max_step > 0.0) || options.max_step > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step: options.max_step, limit });
    }

    let (drift, diffusion) = drift_and_diffusion(params, bath);
    let hbar = params.hbar();
    let target = bath.asymptotic_state();
    let target = GaussianState::with_hbar(
        target.means().iter().copied().collect(),
        target.covariance() * hbar,
        hbar,
    )?;

    let mut d = Vector4::from_iterator(initial.means().iter().copied());
    let mut sigma = Matrix4::from_iterator(initial.covariance().iter().copied());
    let mut now = 0.0;

    let mut record = EvolutionRecord {
        times: Vec::with_capacity(t_grid.len()),
        states: Vec::with_capacity(t_grid.len()),
        fidelity_track: Vec::with_capacity(t_grid.len()),
        coherence_track: Vec::with_capacity(t_grid.len()),
        backflow_intervals: Vec::new(),
    };

    for &t in t_grid {
        let span = t - now;
        if span > 0.0 {
            let steps = (span / options.max_step).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rk4_step(&drift, &diffusion, &mut d, &mut sigma, h);
            }
            // keep σ exactly symmetric
            sigma = 0.5 * (sigma + sigma.transpose());
            now = t;
        }
        for mode in 0..2 {
            let o = 2 * mode;
            let block = Matrix2::new(sigma[(o, o)], sigma[(o, o + 1)], sigma[(o + 1, o)], sigma[(o + 1, o + 1)]);
            let nu = block.determinant().max(0.0).sqrt() / hbar;
            if !(nu >= 1.0 - 1e-6) {
                return Err(Error::Unphysical { time: t, nu });
            }
        }
        let state = GaussianState::from_parts(
            DVector::from_iterator(4, d.iter().copied()),
            DMatrix::from_iterator(4, 4, sigma.iter().copied()),
            hbar,
        );
        let system = state.reduce_mode(Mode::First)?;
        record.fidelity_track.push(fidelity(&system, &target)?);
        record.coherence_track.push(coherence_clamped(&system)?);
        record.times.push(t);
        record.states.push(state);
    }
    record.backflow_intervals = backflow_intervals(&record.times, &record.fidelity_track)?;
    Ok(record)
}

// Reduced states on the physical boundary can come out at ν = 1 - ε.
fn coherence_clamped(state: &GaussianState) -> Result<f64> {
    let nu = state.symplectic_eigenvalue()?;
    if nu >= 1.0 - 1e-9 {
        return state.coherence();
    }
    let cov = state.covariance() * (1.0 / nu);
    GaussianState::with_hbar(state.means().iter().copied().collect(), cov, state.hbar())?.coherence()
}

fn rk4_step(a: &Matrix4<f64>, diff: &Matrix4<f64>, d: &mut Vector4<f64>, s: &mut Matrix4<f64>, h: f64) {
    let fd = |x: &Vector4<f64>| a * x;
    let fs = |x: &Matrix4<f64>| a * x + x * a.transpose() + diff;
    let (k1d, k1s) = (fd(d), fs(s));
    let (k2d, k2s) = (fd(&(*d + 0.5 * h * k1d)), fs(&(*s + 0.5 * h * k1s)));
    let (k3d, k3s) = (fd(&(*d + 0.5 * h * k2d)), fs(&(*s + 0.5 * h * k2s)));
    let (k4d, k4s) = (fd(&(*d + h * k3d)), fs(&(*s + h * k3s)));
    *d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    *s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
}

/// Maximal time windows over which the fidelity to the asymptotic state
/// drops by more than `1e-9` between consecutive samples.
///
/// A Markovian approach to the fixed point never lowers this fidelity, so
/// each window is a witness of information flowing back into the system.
pub fn backflow_intervals(times: &[f64], fidelity_track: &[f64]) -> Result<Vec<(f64, f64)>> {
    if times.len() != fidelity_track.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), got: fidelity_track.len() });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times must be strictly increasing"));
    }
    Ok(flagged_runs(times, fidelity_track, |prev, next| next < prev - 1e-9))
}

/// Maximal windows where `track` rises by more than `1e-9` per sample.
pub fn increase_intervals(times: &[f64], track: &[f64]) -> Vec<(f64, f64)> {
    flagged_runs(times, track, |prev, next| next > prev + 1e-9)
}

fn flagged_runs(times: &[f64], track: &[f64], flag: impl Fn(f64, f64) -> bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for i in 1..track.len() {
        if flag(track[i - 1], track[i]) {
            open = Some(match open {
                Some((start, _)) => (start, times[i]),
                None => (times[i - 1], times[i]),
            });
        } else if let Some(run) = open.take() {
            out.push(run);
        }
    }
    out.extend(open);
    out
}
