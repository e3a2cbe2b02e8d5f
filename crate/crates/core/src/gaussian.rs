//! Gaussian states in the covariance-matrix representation.
//!
//! Covariances follow `σ_AB = ⟨AB + BA⟩ - 2⟨A⟩⟨B⟩`, so the vacuum has
//! `σ = ħ·I`. Fidelity, coherence and mean photon number are evaluated on
//! the rescaled moments `σ/ħ`, `d/sqrt(ħ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Mode;

const SYMMETRY_TOL: f64 = 1e-12;
const PHYSICAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaussianRecord", into = "GaussianRecord")]
pub struct GaussianState {
    modes: usize,
    hbar: f64,
    means: DVector<f64>,
    covariance: DMatrix<f64>,
}

/// Flat serialized form `{N, hbar, d[], sigma[][]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRecord {
    #[serde(rename = "N")]
    pub modes: usize,
    pub hbar: f64,
    pub d: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
}

impl TryFrom<GaussianRecord> for GaussianState {
    type Error = Error;

    fn try_from(r: GaussianRecord) -> Result<Self> {
        let dim = 2 * r.modes;
        if r.sigma.len() != dim || r.sigma.iter().any(|row| row.len() != dim) {
            return Err(Error::invalid(format!("sigma must be {dim}x{dim}")));
        }
        let cov = DMatrix::from_fn(dim, dim, |i, j| r.sigma[i][j]);
        Self::with_hbar(r.d, cov, r.hbar)
    }
}

impl From<GaussianState> for GaussianRecord {
    fn from(s: GaussianState) -> Self {
        let dim = 2 * s.modes;
        GaussianRecord {
            modes: s.modes,
            hbar: s.hbar,
            d: s.means.iter().copied().collect(),
            sigma: (0..dim).map(|i| (0..dim).map(|j| s.covariance[(i, j)]).collect()).collect(),
        }
    }
}

impl GaussianState {
    /// State with `ħ = 1`.
    pub fn new(means: Vec<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        Self::with_hbar(means, covariance, 1.0)
    }

    pub fn with_hbar(means: Vec<f64>, covariance: DMatrix<f64>, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
        }
        let dim = means.len();
        if dim != 2 && dim != 4 {
            return Err(Error::invalid(format!("first moments must have length 2 or 4, got {dim}")));
        }
        if covariance.nrows() != dim || covariance.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: covariance.nrows() });
        }
        if means.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("moments must be finite"));
        }
        let scale = covariance.amax().max(1.0);
        for i in 0..dim {
            for j in 0..i {
                if (covariance[(i, j)] - covariance[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::invalid("covariance matrix is not symmetric"));
                }
            }
        }
        if covariance.clone().cholesky().is_none() {
            return Err(Error::invalid("covariance matrix is not positive definite"));
        }
        let state = Self { modes: dim / 2, hbar, means: DVector::from_vec(means), covariance };
        for m in 0..state.modes {
            let nu = state.block_nu(m);
            if nu < hbar * (1.0 - PHYSICAL_TOL) {
                return Err(Error::invalid(format!(
                    "mode {} violates the uncertainty principle: nu = {nu} < hbar = {hbar}",
                    m + 1
                )));
            }
        }
        Ok(state)
    }

    /// Skips validation. Used for intermediate states of the integrator,
    /// which checks physicality itself.
    pub(crate) fn from_parts(means: DVector<f64>, covariance: DMatrix<f64>, hbar: f64) -> Self {
        Self { modes: means.len() / 2, hbar, means, covariance }
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        let dim = 2 * modes;
        Self::new(vec![0.0; dim], DMatrix::identity(dim, dim))
    }

    /// Coherent state with `σ = I` and displacement `(q, p)`.
    pub fn coherent(q: f64, p: f64) -> Result<Self> {
        Self::new(vec![q, p], DMatrix::identity(2, 2))
    }

    /// Displaced thermal state `σ = v·I`, `d = (q, p)`.
    pub fn displaced_thermal(q: f64, p: f64, variance: f64) -> Result<Self> {
        Self::new(vec![q, p], DMatrix::identity(2, 2) * variance)
    }

    /// Two-mode product state `a ⊕ b`.
    pub fn product(a: &GaussianState, b: &GaussianState) -> Result<Self> {
        if a.modes != 1 || b.modes != 1 {
            return Err(Error::invalid("product expects two single-mode states"));
        }
        if a.hbar != b.hbar {
            return Err(Error::invalid("product of states with different hbar"));
        }
        let mut cov = DMatrix::zeros(4, 4);
        cov.view_mut((0, 0), (2, 2)).copy_from(&a.covariance);
        cov.view_mut((2, 2), (2, 2)).copy_from(&b.covariance);
        let means = a.means.iter().chain(b.means.iter()).copied().collect();
        Self::with_hbar(means, cov, a.hbar)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn means(&self) -> &DVector<f64> {
        &self.means
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn to_record(&self) -> GaussianRecord {
        self.clone().into()
    }

    fn block(&self, mode: usize) -> Matrix2<f64> {
        let o = 2 * mode;
        Matrix2::new(
            self.covariance[(o, o)],
            self.covariance[(o, o + 1)],
            self.covariance[(o + 1, o)],
            self.covariance[(o + 1, o + 1)],
        )
    }

    fn block_nu(&self, mode: usize) -> f64 {
        let b = self.block(mode);
        (b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]).max(0.0).sqrt()
    }

    fn require_single(&self) -> Result<()> {
        if self.modes != 1 {
            return Err(Error::invalid(format!("expected a single-mode state, got {} modes", self.modes)));
        }
        Ok(())
    }

    /// Symplectic eigenvalue `ν = sqrt(σ11 σ22 - σ12²)` in units of ħ.
    pub fn symplectic_eigenvalue(&self) -> Result<f64> {
        self.require_single()?;
        Ok(self.block_nu(0) / self.hbar)
    }

    /// `exp(-½ (R-d)ᵀ σ⁻¹ (R-d)) / ((2π)^N sqrt(det σ))`
    pub fn wigner(&self, point: &[f64]) -> Result<f64> {
        if point.len() != 2 * self.modes {
            return Err(Error::DimensionMismatch { expected: 2 * self.modes, got: point.len() });
        }
        if self.covariance.determinant() <= 0.0 {
            return Err(Error::SingularCovariance);
        }
        Ok(self.wigner_unchecked(point))
    }

    pub(crate) fn wigner_unchecked(&self, point: &[f64]) -> f64 {
        let diff = DVector::from_column_slice(point) - &self.means;
        let chol = self.covariance.clone().cholesky().expect("validated covariance");
        let quad = diff.dot(&chol.solve(&diff));
        let det = chol.determinant();
        (-0.5 * quad).exp() / ((2.0 * PI).powi(self.modes as i32) * det.sqrt())
    }

    /// Gaussian marginal: the kept mode's block of `σ` and entries of `d`.
    pub fn reduce_mode(&self, mode: Mode) -> Result<GaussianState> {
        if self.modes != 2 {
            return Err(Error::invalid("reduce_mode expects a two-mode state"));
        }
        let o = 2 * mode.index();
        Ok(Self {
            modes: 1,
            hbar: self.hbar,
            means: self.means.rows(o, 2).into_owned(),
            covariance: self.covariance.view((o, o), (2, 2)).into_owned(),
        })
    }

    /// Mean photon number `(σ11 + σ22 + d1² + d2² - 2)/4` in ħ units.
    pub fn mean_photon(&self) -> Result<f64> {
        self.require_single()?;
        let h = self.hbar;
        let b = self.block(0);
        let n = (b[(0, 0)] / h + b[(1, 1)] / h + self.means.norm_squared() / h - 2.0) / 4.0;
        Ok(if n < 0.0 && n > -1e-12 { 0.0 } else { n })
    }

    /// Relative-entropy coherence in bits, `S(ρ_th(n̄)) - S(ρ)`.
    pub fn coherence(&self) -> Result<f64> {
        let nu = self.symplectic_eigenvalue()?;
        if nu < 1.0 - PHYSICAL_TOL {
            return Err(Error::invalid(format!("unphysical state: nu = {nu} < 1")));
        }
        let nbar = self.mean_photon()?;
        let c = thermal_entropy_bits(nbar) - gaussian_entropy_bits(nu.max(1.0));
        Ok(if c.abs() <= 1e-12 { 0.0 } else { c })
    }
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy (bits) of a thermal state with mean occupation `nbar`.
pub fn thermal_entropy_bits(nbar: f64) -> f64 {
    xlog2x(nbar + 1.0) - xlog2x(nbar)
}

/// Von Neumann entropy (bits) of a single-mode Gaussian state with
/// symplectic eigenvalue `nu`.
pub fn gaussian_entropy_bits(nu: f64) -> f64 {
    xlog2x((nu + 1.0) / 2.0) - xlog2x((nu - 1.0) / 2.0)
}

/// Thermal state `d = 0`, `σ = (2n̄ + 1) I`.
pub fn thermal_state(nbar: f64) -> Result<GaussianState> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::invalid(format!("mean photon number must be >= 0, got {nbar}")));
    }
    GaussianState::new(vec![0.0, 0.0], DMatrix::identity(2, 2) * (2.0 * nbar + 1.0))
}

/// Fidelity between single-mode Gaussian states,
/// `2/(sqrt(Δ + δ) - sqrt(δ)) · exp(-½ dᵀ (σ1 + σ2)⁻¹ d)` with
/// `Δ = det(σ1 + σ2)`, `δ = (det σ1 - 1)(det σ2 - 1)`, `d = d1 - d2`.
pub fn fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    a.require_single()?;
    b.require_single()?;
    if a.hbar != b.hbar {
        return Err(Error::invalid("fidelity of states with different hbar"));
    }
    let h = a.hbar;
    let sa = a.block(0) / h;
    let sb = b.block(0) / h;
    let sum = sa + sb;
    let big_delta = sum.determinant();
    let small_delta = ((sa.determinant() - 1.0) * (sb.determinant() - 1.0)).max(0.0);
    let inv = sum.try_inverse().ok_or(Error::SingularCovariance)?;
    let d = Vector2::new(a.means[0] - b.means[0], a.means[1] - b.means[1]) / h.sqrt();
    let f = 2.0 / ((big_delta + small_delta).sqrt() - small_delta.sqrt()) * (-0.5 * d.dot(&(inv * d))).exp();
    Ok(f.min(1.0))
}
