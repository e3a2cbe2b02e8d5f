//! A product of Fock states under the coupling: classical flow, the evolved
//! Wigner function, and the single-mode marginals swapping at γt = π/2.

use std::f64::consts::PI;

use coupled_wigner::fock::classical_trajectory;
use coupled_wigner::{gauss_hermite, FockPairState, Mode, OscillatorParams, PhasePoint};

fn main() -> coupled_wigner::Result<()> {
    let p = OscillatorParams::natural(0.1)?;
    let x0 = PhasePoint::new(1.0, 0.0, 0.0, 0.0);
    for t in [0.0, PI / 2.0, 5.0 * PI] {
        println!("x({t:.3}) = {:?}", classical_trajectory(&x0, t, &p)?.to_array());
    }

    let state = FockPairState::new(1, 0, p);
    let rule = gauss_hermite(state.default_hermite_nodes())?;
    let origin = PhasePoint::default();
    println!("\n  γt      W(0)       W1(0,0)    W2(0,0)");
    for i in 0..=4 {
        let theta = f64::from(i) * PI / 8.0;
        let t = theta / p.gamma();
        println!(
            "{theta:.4}  {:+.6}  {:+.6}  {:+.6}",
            state.evolved_wigner(&origin, t)?,
            state.marginal_wigner(t, Mode::First, 0.0, 0.0, &rule)?,
            state.marginal_wigner(t, Mode::Second, 0.0, 0.0, &rule)?,
        );
    }
    Ok(())
}
