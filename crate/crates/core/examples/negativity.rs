//! Wigner negativity of the single-mode marginals; the mode-1 value moves
//! to mode 2 as the pair rotates.

use std::f64::consts::PI;

use coupled_wigner::info::{fock_grid, negativity, WignerField};
use coupled_wigner::{ConvergencePolicy, FockPairState, Mode, OscillatorParams};

fn main() -> coupled_wigner::Result<()> {
    let p = OscillatorParams::natural(1.0)?;
    let policy = ConvergencePolicy::default();
    println!("closed form for |1>: {:.10}", 4.0 * (-0.5f64).exp() - 2.0);
    for (k, l) in [(1, 0), (2, 1)] {
        let state = FockPairState::new(k, l, p);
        let grid = fock_grid(&p, state.total_quanta(), 129)?;
        println!("(k, l) = ({k}, {l})");
        for i in 0..=4 {
            let theta = f64::from(i) * PI / 8.0;
            let d1 = negativity(&WignerField::fock_marginal(&state, theta, Mode::First), &grid, &policy)?;
            let d2 = negativity(&WignerField::fock_marginal(&state, theta, Mode::Second), &grid, &policy)?;
            println!("  θ = {i}π/8   δ1 = {d1:.8}   δ2 = {d2:.8}");
        }
    }
    Ok(())
}
