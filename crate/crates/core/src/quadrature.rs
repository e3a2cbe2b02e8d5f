//! Special functions and integration kernels.
//!
//! Two families of rules live here. Gauss-Hermite rules integrate
//! `e^{-x^2}` times a polynomial exactly and are used for every smooth
//! phase-space integral (normalization, purity, marginals, expectation
//! values). Uniform grids are used for integrands with kinks, where the
//! only one that matters is the negative part of a Wigner function.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest supported Gauss-Hermite order.
pub const MAX_HERMITE_NODES: usize = 128;

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("laguerre argument must be finite, got {x}")));
    }
    Ok(laguerre_unchecked(n, x))
}

#[inline]
pub(crate) fn laguerre_unchecked(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 - x,
        _ => {
            let mut prev = 1.0;
            let mut cur = 1.0 - x;
            for k in 1..n {
                let k = f64::from(k);
                let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussHermite,
    UniformTrapezoid,
}

/// One-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`. For a Gauss-Hermite rule this approximates
    /// `∫ e^{-x^2} f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Trapezoid weights on `points` equally spaced nodes spanning `[-extent, extent]`.
    pub fn trapezoid(extent: f64, points: usize) -> Result<Self> {
        if !(extent > 0.0) || points < 2 {
            return Err(Error::invalid("trapezoid rule needs extent > 0 and at least two points"));
        }
        let h = 2.0 * extent / (points - 1) as f64;
        let nodes = (0..points).map(|i| -extent + i as f64 * h).collect();
        let mut weights = vec![h; points];
        weights[0] *= 0.5;
        weights[points - 1] *= 0.5;
        Ok(Self { nodes, weights, kind: RuleKind::UniformTrapezoid })
    }

    pub(crate) fn require_hermite(&self, required: usize) -> Result<()> {
        if self.kind != RuleKind::GaussHermite {
            return Err(Error::invalid("a Gauss-Hermite rule is required"));
        }
        if self.len() < required {
            return Err(Error::InsufficientNodes { required, got: self.len() });
        }
        Ok(())
    }
}

/// Gauss-Hermite rule for the weight `e^{-x^2}` on the real line.
///
/// Initial nodes come from the eigenvalues of the Jacobi matrix
/// (Golub-Welsch); each node is then polished by Newton iteration on the
/// orthonormal Hermite recurrence, which also yields the weights.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_HERMITE_NODES {
        return Err(Error::invalid(format!(
            "Gauss-Hermite order must be in 1..={MAX_HERMITE_NODES}, got {n}"
        )));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|a, b| a.total_cmp(b));

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for mut x in guesses {
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (value, d) = orthonormal_hermite(n, x);
            deriv = d;
            let dx = value / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                deriv = orthonormal_hermite(n, x).1;
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / (deriv * deriv));
    }

    // exact symmetry about the origin
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights, kind: RuleKind::GaussHermite })
}

/// Value of the orthonormal Hermite function polynomial part of degree `n`
/// and `sqrt(2n)` times the degree `n-1` one, which is its derivative.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = std::f64::consts::PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = x * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Uniform grid on the hypercube `[-extent, extent]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    extent: f64,
    points: usize,
    dim: usize,
}

impl PhaseSpaceGrid {
    /// `points` must be odd so the origin is a node.
    pub fn new(extent: f64, points: usize, dim: usize) -> Result<Self> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::invalid(format!("grid extent must be positive, got {extent}")));
        }
        if points < 3 || points % 2 == 0 {
            return Err(Error::invalid(format!("grid point count must be odd and >= 3, got {points}")));
        }
        if dim != 2 && dim != 4 {
            return Err(Error::invalid(format!("grid dimension must be 2 or 4, got {dim}")));
        }
        Ok(Self { extent, points, dim })
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.points - 1) as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of nodes, `points^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.extent + i as f64 * self.spacing()
    }

    /// Same extent, `2M - 1` points per axis. Existing nodes stay nodes.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points - 1, ..*self }
    }

    /// Samples `f` on every node in row-major order (last axis fastest).
    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; self.dim];
        let mut x = vec![-self.extent; self.dim];
        for _ in 0..self.len() {
            out.push(f(&x));
            for axis in (0..self.dim).rev() {
                idx[axis] += 1;
                if idx[axis] < self.points {
                    x[axis] = self.coordinate(idx[axis]);
                    break;
                }
                idx[axis] = 0;
                x[axis] = -self.extent;
            }
        }
        out
    }
}

/// Trapezoid-rule integral of samples laid out as by [`PhaseSpaceGrid::sample`].
pub fn integrate_grid(samples: &[f64], grid: &PhaseSpaceGrid) -> Result<f64> {
    if samples.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: samples.len() });
    }
    let m = grid.points;
    let edge = |i: usize| if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
    let mut total = 0.0;
    // Sum the fastest axis into rows first; the remaining weight depends only on the row.
    for (row_index, row) in samples.chunks_exact(m).enumerate() {
        let row_sum: f64 = row.iter().enumerate().map(|(i, v)| edge(i) * v).sum();
        let mut weight = 1.0;
        let mut r = row_index;
        for _ in 1..grid.dim {
            weight *= edge(r % m);
            r /= m;
        }
        total += weight * row_sum;
    }
    Ok(total * grid.cell_volume())
}

// 4-point Gauss-Legendre on [-1, 1]
const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_8,
];

/// `∫ min(f, 0)` over a two-dimensional grid's square.
///
/// Cells whose four corners are all nonnegative contribute nothing. Cells
/// with all corners negative get a 4x4 Gauss-Legendre rule. Cells whose
/// corners change sign are split into quadrants down to `refine_depth`
/// levels, so the kink of `min(f, 0)` along the nodal line is resolved
/// locally instead of by the global spacing.
pub fn integrate_negative_part(
    grid: &PhaseSpaceGrid,
    refine_depth: u32,
    f: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    if grid.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: grid.dim });
    }
    let m = grid.points;
    let h = grid.spacing();
    let samples = grid.sample(|x| f(x[0], x[1]));
    let at = |i: usize, j: usize| samples[i * m + j];
    let mut total = 0.0;
    for i in 0..m - 1 {
        for j in 0..m - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            if corners.iter().all(|&v| v >= 0.0) {
                continue;
            }
            let cell = Cell { x0: grid.coordinate(i), y0: grid.coordinate(j), size: h, corners };
            total += cell.negative_part(&f, refine_depth);
        }
    }
    Ok(total)
}

struct Cell {
    x0: f64,
    y0: f64,
    size: f64,
    // (x0,y0), (x0+h,y0), (x0,y0+h), (x0+h,y0+h)
    corners: [f64; 4],
}

impl Cell {
    fn negative_part(&self, f: &impl Fn(f64, f64) -> f64, depth: u32) -> f64 {
        let negative = self.corners.iter().filter(|&&v| v < 0.0).count();
        if negative == 0 {
            return 0.0;
        }
        if negative == 4 || depth == 0 {
            return self.gauss_legendre(|x, y| f(x, y).min(0.0));
        }
        let half = 0.5 * self.size;
        let [c00, c10, c01, c11] = self.corners;
        let (xm, ym) = (self.x0 + half, self.y0 + half);
        let mid = f(xm, ym);
        let bottom = f(xm, self.y0);
        let top = f(xm, self.y0 + self.size);
        let left = f(self.x0, ym);
        let right = f(self.x0 + self.size, ym);
        let children = [
            Cell { x0: self.x0, y0: self.y0, size: half, corners: [c00, bottom, left, mid] },
            Cell { x0: xm, y0: self.y0, size: half, corners: [bottom, c10, mid, right] },
            Cell { x0: self.x0, y0: ym, size: half, corners: [left, mid, c01, top] },
            Cell { x0: xm, y0: ym, size: half, corners: [mid, right, top, c11] },
        ];
        children.iter().map(|c| c.negative_part(f, depth - 1)).sum()
    }

    fn gauss_legendre(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let half = 0.5 * self.size;
        let (cx, cy) = (self.x0 + half, self.y0 + half);
        let mut sum = 0.0;
        for (xi, wx) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            for (yi, wy) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
                sum += wx * wy * g(cx + half * xi, cy + half * yi);
            }
        }
        sum * half * half
    }
}

/// Grid-doubling protocol for integrands with kinks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePolicy {
    /// Relative change between successive refinements that counts as converged.
    pub tolerance: f64,
    /// Changes below this are treated as converged regardless of magnitude.
    pub absolute_floor: f64,
    /// Largest per-axis point count that may be tried.
    pub max_points: usize,
    /// Quadrant splits applied to sign-changing cells.
    pub refine_depth: u32,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self { tolerance: 1e-6, absolute_floor: 1e-12, max_points: 1025, refine_depth: 6 }
    }
}

impl ConvergencePolicy {
    /// Evaluates `integral` on `start` and successively refined grids until two
    /// consecutive values agree. Returns the last value and the grid it came from.
    pub fn run(
        &self,
        start: &PhaseSpaceGrid,
        mut integral: impl FnMut(&PhaseSpaceGrid) -> Result<f64>,
    ) -> Result<(f64, PhaseSpaceGrid)> {
        if start.points > self.max_points {
            return Err(Error::invalid(format!(
                "starting grid has {} points, above the cap {}",
                start.points, self.max_points
            )));
        }
        let mut grid = *start;
        let mut previous = integral(&grid)?;
        let mut last_change = f64::INFINITY;
        while grid.refined().points <= self.max_points {
            grid = grid.refined();
            let value = integral(&grid)?;
            let change = (value - previous).abs();
            let scale = value.abs().max(previous.abs());
            if change <= self.absolute_floor || change <= self.tolerance * scale {
                return Ok((value, grid));
            }
            last_change = if scale > 0.0 { change / scale } else { change };
            previous = value;
        }
        Err(Error::NotConverged { points: grid.points, last_change })
    }
}
