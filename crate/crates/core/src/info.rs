//! Informational functionals of Wigner functions: linear entropy, mutual
//! information, Wigner negativity and expectation values.
//!
//! Smooth integrals use tensor-product Gauss-Hermite rules after the
//! substitution `x = center + width·u`, which absorbs a Gaussian envelope
//! `exp(-Σ((x - center)/width)²)` into the rule's weight. For Fock-type
//! fields the remaining integrand is a polynomial and the result is exact.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fock::{FockPairState, Mode, OscillatorParams, PhasePoint};
use crate::gaussian::GaussianState;
use crate::quadrature::{integrate_negative_part, ConvergencePolicy, PhaseSpaceGrid, QuadratureRule};

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A Wigner function on a one- or two-mode phase space, normalized to one.
///
/// Coordinates are ordered `(q1, p1, q2, p2)`.
#[derive(Clone)]
pub struct WignerField {
    modes: usize,
    hbar: f64,
    center: Vec<f64>,
    widths: Vec<f64>,
    eval: Evaluator,
}

impl std::fmt::Debug for WignerField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WignerField")
            .field("modes", &self.modes)
            .field("hbar", &self.hbar)
            .field("center", &self.center)
            .field("widths", &self.widths)
            .finish_non_exhaustive()
    }
}

impl WignerField {
    /// Wraps an arbitrary evaluator. `center` and `widths` (one per axis)
    /// describe the Gaussian envelope used to place quadrature nodes.
    pub fn new(
        modes: usize,
        hbar: f64,
        center: Vec<f64>,
        widths: Vec<f64>,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if modes != 1 && modes != 2 {
            return Err(Error::invalid(format!("mode count must be 1 or 2, got {modes}")));
        }
        if !(hbar > 0.0) {
            return Err(Error::invalid("hbar must be positive"));
        }
        let dim = 2 * modes;
        if center.len() != dim || widths.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: center.len().min(widths.len()) });
        }
        if widths.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::invalid("envelope widths must be positive"));
        }
        Ok(Self { modes, hbar, center, widths, eval: Arc::new(eval) })
    }

    /// Full two-mode Wigner function of an evolving Fock pair at time `t`.
    pub fn fock_pair(state: &FockPairState, t: f64) -> Self {
        let s = *state;
        let theta = s.angle(t);
        let (sq, sp) = s.params().envelope_widths();
        Self {
            modes: 2,
            hbar: s.params().hbar(),
            center: vec![0.0; 4],
            widths: vec![sq, sp, sq, sp],
            eval: Arc::new(move |x| s.wigner_at_angle(&PhasePoint::from_slice(x), theta)),
        }
    }

    /// Stationary eigen-Wigner function with quantum numbers `(n1, n2)`.
    pub fn stationary(n1: u32, n2: u32, params: &OscillatorParams) -> Self {
        let p = *params;
        let (sq, sp) = p.envelope_widths();
        Self {
            modes: 2,
            hbar: p.hbar(),
            center: vec![0.0; 4],
            widths: vec![sq, sp, sq, sp],
            eval: Arc::new(move |x| crate::fock::stationary_wigner_unchecked(n1, n2, &PhasePoint::from_slice(x), &p)),
        }
    }

    /// One mode's reduced Wigner function of an evolving Fock pair, built
    /// from the closed-form Fock populations of the reduced state.
    pub fn fock_marginal(state: &FockPairState, t: f64, mode: Mode) -> Self {
        let s = *state;
        let pops = s.reduced_populations(s.angle(t), mode);
        let (sq, sp) = s.params().envelope_widths();
        Self {
            modes: 1,
            hbar: s.params().hbar(),
            center: vec![0.0; 2],
            widths: vec![sq, sp],
            eval: Arc::new(move |x| s.marginal_from_populations(&pops, x[0], x[1])),
        }
    }

    /// Gaussian Wigner function of a one- or two-mode state.
    pub fn gaussian(state: &GaussianState) -> Self {
        let s = state.clone();
        let diag = state.covariance().diagonal();
        Self {
            modes: state.modes(),
            hbar: state.hbar(),
            center: state.means().iter().copied().collect(),
            widths: diag.iter().map(|v| (2.0 * v).sqrt()).collect(),
            eval: Arc::new(move |x| s.wigner_unchecked(x)),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok((self.eval)(x))
    }

    /// Reduced field of one mode of a two-mode field, by Gauss-Hermite
    /// integration over the other mode's envelope.
    pub fn marginal(&self, mode: Mode, rule: &QuadratureRule) -> Result<Self> {
        rule.require_hermite(1)?;
        if self.modes != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.modes });
        }
        let keep = 2 * mode.index();
        let drop = 2 * mode.other().index();
        let parent = self.clone();
        let rule = rule.clone();
        let eval = move |x: &[f64]| {
            let mut point = [0.0; 4];
            point[keep] = x[0];
            point[keep + 1] = x[1];
            let (cq, cp) = (parent.center[drop], parent.center[drop + 1]);
            let (wq, wp) = (parent.widths[drop], parent.widths[drop + 1]);
            let mut sum = 0.0;
            for (&u, &a) in rule.nodes().iter().zip(rule.weights()) {
                for (&v, &b) in rule.nodes().iter().zip(rule.weights()) {
                    point[drop] = cq + wq * u;
                    point[drop + 1] = cp + wp * v;
                    sum += a * b * (u * u + v * v).exp() * (parent.eval)(&point);
                }
            }
            sum * wq * wp
        };
        Ok(Self {
            modes: 1,
            hbar: self.hbar,
            center: self.center[keep..keep + 2].to_vec(),
            widths: self.widths[keep..keep + 2].to_vec(),
            eval: Arc::new(eval),
        })
    }

    /// `∫ g(x) dx` where `g` carries this field's envelope to the power
    /// `power` (1 for `W·O`, 2 for `W²`).
    fn hermite_integral(&self, rule: &QuadratureRule, power: f64, g: impl Fn(&[f64]) -> f64) -> f64 {
        let dim = self.dim();
        let n = rule.len();
        let scale: Vec<f64> = self.widths.iter().map(|w| w / power.sqrt()).collect();
        let mut idx = vec![0usize; dim];
        let mut x = vec![0.0; dim];
        let mut sum = 0.0;
        for _ in 0..n.pow(dim as u32) {
            let mut weight = 1.0;
            let mut exponent = 0.0;
            for a in 0..dim {
                let u = rule.nodes()[idx[a]];
                weight *= rule.weights()[idx[a]];
                exponent += u * u;
                x[a] = self.center[a] + scale[a] * u;
            }
            sum += weight * exponent.exp() * g(&x);
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < n {
                    break;
                }
                idx[a] = 0;
            }
        }
        sum * scale.iter().product::<f64>()
    }

    /// `∫ W` over the whole phase space.
    pub fn normalization(&self, rule: &QuadratureRule) -> Result<f64> {
        rule.require_hermite(1)?;
        Ok(self.hermite_integral(rule, 1.0, |x| (self.eval)(x)))
    }

    /// `(2πħ)^N ∫ W²`, equal to `Tr ρ²`.
    pub fn purity(&self, rule: &QuadratureRule) -> Result<f64> {
        rule.require_hermite(1)?;
        let integral = self.hermite_integral(rule, 2.0, |x| {
            let w = (self.eval)(x);
            w * w
        });
        Ok((2.0 * PI * self.hbar).powi(self.modes as i32) * integral)
    }
}

/// Linear entropy `1 - (2πħ)^N ∫ W²`.
pub fn linear_entropy(field: &WignerField, rule: &QuadratureRule) -> Result<f64> {
    let s = 1.0 - field.purity(rule)?;
    Ok(clamp_near(s, 0.0, 1.0, 1e-9))
}

/// `S(W1) + S(W2) - S(W)` with marginals obtained by quadrature.
pub fn mutual_information(field: &WignerField, rule: &QuadratureRule) -> Result<f64> {
    if field.modes() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: field.modes() });
    }
    let s1 = linear_entropy(&field.marginal(Mode::First, rule)?, rule)?;
    let s2 = linear_entropy(&field.marginal(Mode::Second, rule)?, rule)?;
    let s = linear_entropy(field, rule)?;
    Ok(s1 + s2 - s)
}

/// Mutual information of an evolving Fock pair at time `t`.
pub fn fock_mutual_information(state: &FockPairState, t: f64, rule: &QuadratureRule) -> Result<f64> {
    rule.require_hermite(state.total_quanta() as usize + 2)?;
    mutual_information(&WignerField::fock_pair(state, t), rule)
}

/// Wigner negativity `∫|W| - ∫W` of a single-mode field.
///
/// Evaluated as `-2 ∫ min(W, 0)` on `grid`, refined by doubling under
/// `policy` until successive values agree.
pub fn negativity(field: &WignerField, grid: &PhaseSpaceGrid, policy: &ConvergencePolicy) -> Result<f64> {
    if field.modes() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: field.modes() });
    }
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: grid.dim() });
    }
    let (value, _) = policy.run(grid, |g| {
        let neg = integrate_negative_part(g, policy.refine_depth, |q, p| (field.eval)(&[q, p]))?;
        Ok(-2.0 * neg)
    })?;
    Ok(if value > -1e-9 && value <= 0.0 { 0.0 } else { value })
}

/// Square grid of half-width `6 sqrt(ħ(2N + 1))`, scaled by the larger
/// envelope width, for a state with `N` total quanta.
pub fn fock_grid(params: &OscillatorParams, total_quanta: u32, points: usize) -> Result<PhaseSpaceGrid> {
    let hbar = params.hbar();
    let (sq, sp) = params.envelope_widths();
    let stretch = sq.max(sp) / hbar.sqrt();
    let extent = 6.0 * (hbar * (2.0 * f64::from(total_quanta) + 1.0)).sqrt() * stretch;
    PhaseSpaceGrid::new(extent, points, 2)
}

/// `∫ W·O` over phase space for a normalized `W`.
pub fn expectation_value(
    field: &WignerField,
    observable: impl Fn(&[f64]) -> f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    rule.require_hermite(1)?;
    Ok(field.hermite_integral(rule, 1.0, |x| (field.eval)(x) * observable(x)))
}

fn clamp_near(v: f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if v < lo && v >= lo - tol {
        lo
    } else if v > hi && v <= hi + tol {
        hi
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_hermite;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn unit(gamma: f64) -> OscillatorParams {
        OscillatorParams::natural(gamma).unwrap()
    }

    #[test]
    fn pure_fock_pair_has_zero_entropy() {
        let p = unit(0.1);
        for (k, l) in [(1, 0), (2, 1), (0, 0)] {
            let s = FockPairState::new(k, l, p);
            let rule = gauss_hermite(s.default_hermite_nodes()).unwrap();
            for t in [0.0, 3.0, 7.7] {
                let field = WignerField::fock_pair(&s, t);
                assert!(linear_entropy(&field, &rule).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn vacuum_marginal_is_pure() {
        let s = FockPairState::new(1, 0, unit(0.1));
        let rule = gauss_hermite(8).unwrap();
        let w2 = WignerField::fock_marginal(&s, 0.0, Mode::Second);
        assert!(linear_entropy(&w2, &rule).unwrap().abs() < 1e-9);
    }

    #[test]
    fn marginal_entropy_at_quarter_turn() {
        // Brute-force oracle: midpoint rule on a fine 2D grid of the
        // directly integrated 4D Wigner function is too slow, so integrate
        // W1² on a dense trapezoid grid where W1 comes from 2D quadrature
        // of the full state.
        let p = unit(0.1);
        let s = FockPairState::new(1, 0, p);
        let t = FRAC_PI_4 / p.gamma();
        let rule = gauss_hermite(8).unwrap();
        let field = WignerField::fock_pair(&s, t).marginal(Mode::First, &rule).unwrap();
        let got = linear_entropy(&field, &rule).unwrap();
        let grid = PhaseSpaceGrid::new(7.0, 281, 2).unwrap();
        let sq = grid.sample(|x| field.eval(x).unwrap().powi(2));
        let oracle = 1.0 - 2.0 * PI * crate::quadrature::integrate_grid(&sq, &grid).unwrap();
        assert!(got > 0.0 && got < 1.0);
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        assert!((got - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_product_and_swap() {
        let p = unit(0.1);
        let s = FockPairState::new(1, 0, p);
        let rule = gauss_hermite(8).unwrap();
        assert!(fock_mutual_information(&s, 0.0, &rule).unwrap().abs() < 1e-9);
        assert!(fock_mutual_information(&s, FRAC_PI_2 / p.gamma(), &rule).unwrap().abs() < 1e-8);
        let peak = fock_mutual_information(&s, FRAC_PI_4 / p.gamma(), &rule).unwrap();
        assert!((peak - 1.0).abs() < 1e-10, "{peak}");
    }

    #[test]
    fn negativity_examples() {
        let p = unit(0.1);
        let s = FockPairState::new(1, 0, p);
        let grid = fock_grid(&p, 1, 129).unwrap();
        let policy = ConvergencePolicy::default();
        let fock1 = WignerField::fock_marginal(&s, 0.0, Mode::First);
        let vac = WignerField::fock_marginal(&s, 0.0, Mode::Second);
        let expected = 4.0 * (-0.5f64).exp() - 2.0;
        assert!((negativity(&fock1, &grid, &policy).unwrap() - expected).abs() < 1e-6);
        assert!(negativity(&vac, &grid, &policy).unwrap().abs() < 1e-6);

        let t = FRAC_PI_2 / p.gamma();
        let m1 = WignerField::fock_marginal(&s, t, Mode::First);
        let m2 = WignerField::fock_marginal(&s, t, Mode::Second);
        assert!(negativity(&m1, &grid, &policy).unwrap().abs() < 1e-6);
        assert!((negativity(&m2, &grid, &policy).unwrap() - expected).abs() < 1e-6);
    }

    #[test]
    fn negativity_rejects_two_mode_fields() {
        let s = FockPairState::new(1, 0, unit(0.1));
        let grid = fock_grid(s.params(), 1, 33).unwrap();
        let err = negativity(&WignerField::fock_pair(&s, 0.0), &grid, &ConvergencePolicy::default());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn expectation_examples() {
        let p = unit(0.1);
        let rule = gauss_hermite(8).unwrap();
        let eigen = WignerField::stationary(1, 0, &p);
        assert_relative_eq!(expectation_value(&eigen, |_| 1.0, &rule).unwrap(), 1.0, max_relative = 1e-12);
        let h = expectation_value(&eigen, |x| p.hamiltonian(&PhasePoint::from_slice(x)), &rule).unwrap();
        assert_relative_eq!(h, crate::fock::energy(1, 0, &p), max_relative = 1e-12);

        for (k, l) in [(1, 0), (2, 1)] {
            let s = FockPairState::new(k, l, p);
            let field = WignerField::fock_pair(&s, 4.2);
            assert!(expectation_value(&field, |x| x[0], &rule).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_states_reproduce_spectrum() {
        let p = OscillatorParams::new(1.3, 0.9, 1.0, 0.25).unwrap();
        let rule = gauss_hermite(10).unwrap();
        for (n1, n2) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)] {
            let field = WignerField::stationary(n1, n2, &p);
            assert_relative_eq!(field.normalization(&rule).unwrap(), 1.0, max_relative = 1e-10);
            assert_relative_eq!(field.purity(&rule).unwrap(), 1.0, max_relative = 1e-10);
            let h = expectation_value(&field, |x| p.hamiltonian(&PhasePoint::from_slice(x)), &rule).unwrap();
            assert_relative_eq!(h, crate::fock::energy(n1, n2, &p), max_relative = 1e-10);
        }
    }

    #[test]
    fn field_construction_checks() {
        assert!(WignerField::new(3, 1.0, vec![0.0; 6], vec![1.0; 6], |_| 0.0).is_err());
        assert!(WignerField::new(1, 1.0, vec![0.0; 4], vec![1.0; 4], |_| 0.0).is_err());
        assert!(WignerField::new(1, 0.0, vec![0.0; 2], vec![1.0; 2], |_| 0.0).is_err());
        let f = WignerField::new(1, 1.0, vec![0.0; 2], vec![1.0; 2], |x| x[0]).unwrap();
        assert!(f.eval(&[1.0]).is_err());
        assert_eq!(f.eval(&[2.0, 0.0]).unwrap(), 2.0);
    }
}
