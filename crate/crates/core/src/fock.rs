//! Analytic Wigner functions of two harmonic oscillators coupled by
//! `γ (p1 q2 - p2 q1)`.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = α² (p1² + p2²) + β² (q1² + q2²) + γ (p1 q2 - p2 q1),   α² = 1/2m,  β² = mω²/2
//! ```
//!
//! The two terms commute: the first rotates each mode in its own phase
//! plane at frequency `ω = 2αβ`, the second rotates the `(q1, q2)` and
//! `(p1, p2)` planes jointly at rate `γ`. Single-mode Fock Wigner functions
//! are invariant under the first rotation, so a product Fock state evolves
//! by the inter-mode rotation alone.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{laguerre_unchecked, QuadratureRule};

/// Mass, frequency, ħ and inter-mode coupling of the two identical oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    omega: f64,
    hbar: f64,
    gamma: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self { mass: 1.0, omega: 1.0, hbar: 1.0, gamma: 0.1 }
    }
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite, got {gamma}")));
        }
        Ok(Self { mass, omega, hbar, gamma })
    }

    /// Natural units `ħ = m = ω = 1` with the given coupling.
    pub fn natural(gamma: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, gamma)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.mass, self.omega, self.hbar, gamma)
    }

    /// `α = 1/sqrt(2m)`
    pub fn alpha(&self) -> f64 {
        (2.0 * self.mass).sqrt().recip()
    }

    /// `β = sqrt(m ω² / 2)`
    pub fn beta(&self) -> f64 {
        (0.5 * self.mass * self.omega * self.omega).sqrt()
    }

    /// `α/β = 1/(mω)`.
    pub(crate) fn position_weight(&self) -> f64 {
        (self.mass * self.omega).recip()
    }

    /// Squared oscillator radius `mω q² + p²/(mω)`.
    pub(crate) fn radius_sq(&self, q: f64, p: f64) -> f64 {
        let w = self.position_weight();
        q * q / w + w * p * p
    }

    /// Widths `(s_q, s_p)` with `r²/ħ = (q/s_q)² + (p/s_p)²`.
    pub fn envelope_widths(&self) -> (f64, f64) {
        let w = self.position_weight();
        ((self.hbar * w).sqrt(), (self.hbar / w).sqrt())
    }

    /// Classical Hamiltonian at a phase point.
    pub fn hamiltonian(&self, x: &PhasePoint) -> f64 {
        let a2 = 0.5 / self.mass;
        let b2 = 0.5 * self.mass * self.omega * self.omega;
        a2 * (x.p1 * x.p1 + x.p2 * x.p2)
            + b2 * (x.q1 * x.q1 + x.q2 * x.q2)
            + self.gamma * (x.p1 * x.q2 - x.p2 * x.q1)
    }
}

/// A point `(q1, p1, q2, p2)` of the four-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Self {
        Self { q1, p1, q2, p2 }
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self { q1: x[0], p1: x[1], q2: x[2], p2: x[3] }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.p1, self.q2, self.p2]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Joint rotation of the `(q1, q2)` and `(p1, p2)` planes:
    /// `q1' = q1 cos θ + q2 sin θ`, `q2' = q2 cos θ - q1 sin θ`.
    pub fn rotate_modes(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            q1: c * self.q1 + s * self.q2,
            p1: c * self.p1 + s * self.p2,
            q2: c * self.q2 - s * self.q1,
            p2: c * self.p2 - s * self.p1,
        }
    }
}

/// Energy eigenvalue `2ħαβ(n1 + n2 + 1) + ħγ(n1 - n2)`.
pub fn energy(n1: u32, n2: u32, params: &OscillatorParams) -> f64 {
    let hbar = params.hbar;
    2.0 * hbar * params.alpha() * params.beta() * (f64::from(n1) + f64::from(n2) + 1.0)
        + hbar * params.gamma * (f64::from(n1) - f64::from(n2))
}

/// Wigner function of the stationary state with energy [`energy`]`(n1, n2)`.
///
/// ```text
/// W = (-1)^{n1+n2} / (π²ħ²) · exp(-R²/ħ) · L_{n1}(Ω₁/ħ) · L_{n2}(Ω₂/ħ)
/// R² = r1² + r2²,   Ω₁ = R² + 2(p1 q2 - p2 q1),   Ω₂ = R² - 2(p1 q2 - p2 q1)
/// ```
///
/// `n1` counts quanta of the circular mode whose angular momentum raises
/// the energy by `ħγ`, so `∫ W H = E_{n1,n2}`.
pub fn stationary_wigner(n1: u32, n2: u32, point: &PhasePoint, params: &OscillatorParams) -> Result<f64> {
    if !point.is_finite() {
        return Err(Error::invalid("phase point must be finite"));
    }
    Ok(stationary_wigner_unchecked(n1, n2, point, params))
}

pub(crate) fn stationary_wigner_unchecked(n1: u32, n2: u32, x: &PhasePoint, params: &OscillatorParams) -> f64 {
    let hbar = params.hbar;
    let big_r = params.radius_sq(x.q1, x.p1) + params.radius_sq(x.q2, x.p2);
    let angular = 2.0 * (x.p1 * x.q2 - x.p2 * x.q1);
    let sign = if (n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (PI * PI * hbar * hbar)
        * (-big_r / hbar).exp()
        * laguerre_unchecked(n1, (big_r + angular) / hbar)
        * laguerre_unchecked(n2, (big_r - angular) / hbar)
}

/// Hamiltonian flow of a classical phase point for time `t`.
pub fn classical_trajectory(initial: &PhasePoint, t: f64, params: &OscillatorParams) -> Result<PhasePoint> {
    if !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite, got {t}")));
    }
    let (s, c) = (params.omega * t).sin_cos();
    let w = params.position_weight();
    let local = |q: f64, p: f64| (c * q + w * s * p, c * p - s * q / w);
    let (q1, p1) = local(initial.q1, initial.p1);
    let (q2, p2) = local(initial.q2, initial.p2);
    Ok(PhasePoint { q1, p1, q2, p2 }.rotate_modes(params.gamma * t))
}

/// Single-mode Fock Wigner function `(-1)^n/(πħ) e^{-r²/ħ} L_n(2r²/ħ)`.
pub fn fock_wigner(n: u32, q: f64, p: f64, params: &OscillatorParams) -> f64 {
    let hbar = params.hbar;
    let r2 = params.radius_sq(q, p) / hbar;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / (PI * hbar) * (-r2).exp() * laguerre_unchecked(n, 2.0 * r2)
}

/// Product Fock state `|k⟩|ℓ⟩` at `t = 0`, evolved under the coupled Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockPairState {
    k: u32,
    l: u32,
    params: OscillatorParams,
}

impl FockPairState {
    pub fn new(k: u32, l: u32, params: OscillatorParams) -> Self {
        Self { k, l, params }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    /// Total number of quanta `k + ℓ`, conserved by the evolution.
    pub fn total_quanta(&self) -> u32 {
        self.k + self.l
    }

    /// Gauss-Hermite order that integrates this state's purity and marginal
    /// integrands exactly.
    pub fn default_hermite_nodes(&self) -> usize {
        8.max(2 * self.total_quanta() as usize + 2)
    }

    /// Inter-mode rotation angle `γt`.
    pub fn angle(&self, t: f64) -> f64 {
        self.params.gamma * t
    }

    /// Wigner function at time `t`: the `t = 0` product evaluated at the
    /// inversely rotated point. Equivalent to
    /// `(-1)^{k+ℓ}/(π²ħ²) e^{-ξ₁²/ħ} L_k(2ξ₁²/ħ) e^{-ξ₂²/ħ} L_ℓ(2ξ₂²/ħ)`.
    pub fn evolved_wigner(&self, point: &PhasePoint, t: f64) -> Result<f64> {
        if !t.is_finite() || !point.is_finite() {
            return Err(Error::invalid("time and phase point must be finite"));
        }
        Ok(self.wigner_at_angle(point, self.angle(t)))
    }

    pub(crate) fn wigner_at_angle(&self, point: &PhasePoint, theta: f64) -> f64 {
        let x = point.rotate_modes(-theta);
        fock_wigner(self.k, x.q1, x.p1, &self.params) * fock_wigner(self.l, x.q2, x.p2, &self.params)
    }

    /// Reduced Wigner function of one mode by Gauss-Hermite integration over
    /// the other mode's phase plane. The other mode's Gaussian envelope is
    /// absorbed into the rule's weight, so the integrand is a polynomial of
    /// degree at most `2(k+ℓ)` per variable.
    pub fn marginal_wigner(&self, t: f64, mode: Mode, q: f64, p: f64, rule: &QuadratureRule) -> Result<f64> {
        rule.require_hermite(self.total_quanta() as usize + 2)?;
        if !(t.is_finite() && q.is_finite() && p.is_finite()) {
            return Err(Error::invalid("time and coordinates must be finite"));
        }
        Ok(self.marginal_at_angle(self.angle(t), mode, q, p, rule))
    }

    pub(crate) fn marginal_at_angle(&self, theta: f64, mode: Mode, q: f64, p: f64, rule: &QuadratureRule) -> f64 {
        let (sq, sp) = self.params.envelope_widths();
        let mut sum = 0.0;
        for (&u, &wu) in rule.nodes().iter().zip(rule.weights()) {
            for (&v, &wv) in rule.nodes().iter().zip(rule.weights()) {
                let (oq, op) = (sq * u, sp * v);
                let point = match mode {
                    Mode::First => PhasePoint::new(q, p, oq, op),
                    Mode::Second => PhasePoint::new(oq, op, q, p),
                };
                sum += wu * wv * (u * u + v * v).exp() * self.wigner_at_angle(&point, theta);
            }
        }
        sum * sq * sp
    }

    /// Fock-number distribution of one mode's reduced state at angle `γt`.
    ///
    /// The inter-mode rotation conserves `k + ℓ`, so the reduced state is
    /// diagonal in the Fock basis. Entry `n` is the probability of `n`
    /// quanta in `mode`.
    pub fn reduced_populations(&self, theta: f64, mode: Mode) -> Vec<f64> {
        let (k, l) = (self.k as usize, self.l as usize);
        let total = k + l;
        let (s, c) = theta.sin_cos();
        let mut probs = vec![0.0; total + 1];
        for (n, prob) in probs.iter_mut().enumerate() {
            // coefficient of (a1†)^n (a2†)^{N-n} in (c a1† - s a2†)^k (s a1† + c a2†)^l
            let mut amp = 0.0;
            for i in n.saturating_sub(l)..=k.min(n) {
                let j = n - i;
                amp += binomial(k, i)
                    * binomial(l, j)
                    * c.powi(i as i32)
                    * (-s).powi((k - i) as i32)
                    * s.powi(j as i32)
                    * c.powi((l - j) as i32);
            }
            let norm = ln_factorial(n) + ln_factorial(total - n) - ln_factorial(k) - ln_factorial(l);
            *prob = amp * amp * norm.exp();
        }
        if mode == Mode::Second {
            probs.reverse();
        }
        probs
    }

    /// Closed-form reduced Wigner function `Σ_n P_n W_n(q, p)`.
    pub fn marginal_from_populations(&self, populations: &[f64], q: f64, p: f64) -> f64 {
        populations
            .iter()
            .enumerate()
            .filter(|(_, &pn)| pn != 0.0)
            .map(|(n, &pn)| pn * fock_wigner(n as u32, q, p, &self.params))
            .sum()
    }
}

/// Which oscillator a reduced quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    pub fn other(self) -> Self {
        match self {
            Mode::First => Mode::Second,
            Mode::Second => Mode::First,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Mode::First => 0,
            Mode::Second => 1,
        }
    }
}

impl TryFrom<u32> for Mode {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            1 => Ok(Mode::First),
            2 => Ok(Mode::Second),
            _ => Err(Error::invalid(format!("mode must be 1 or 2, got {v}"))),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
