//! Gauss-Hermite rules, Laguerre polynomials and grid integration.

use coupled_wigner::quadrature::{integrate_grid, PhaseSpaceGrid};
use coupled_wigner::{gauss_hermite, laguerre};

fn main() -> coupled_wigner::Result<()> {
    let rule = gauss_hermite(5)?;
    println!("5-point rule nodes:   {:?}", rule.nodes());
    println!("5-point rule weights: {:?}", rule.weights());
    let m4 = rule.integrate(|x| x.powi(4));
    println!("∫ e^-x² x⁴ = {m4:.15}  (3√π/4 = {:.15})", 0.75 * std::f64::consts::PI.sqrt());

    for n in [0, 1, 2, 5] {
        println!("L_{n}(2) = {}", laguerre(n, 2.0)?);
    }

    let grid = PhaseSpaceGrid::new(8.0, 257, 2)?;
    let samples = grid.sample(|x| (-(x[0] * x[0] + x[1] * x[1])).exp());
    println!("∫∫ e^-(q²+p²) on the grid = {:.12}", integrate_grid(&samples, &grid)?);
    Ok(())
}
