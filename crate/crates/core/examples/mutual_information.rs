//! Linear-entropy mutual information shared by the two modes as the Fock
//! pair rotates.

use std::f64::consts::PI;

use coupled_wigner::info::{fock_mutual_information, linear_entropy, WignerField};
use coupled_wigner::{gauss_hermite, FockPairState, Mode, OscillatorParams};

fn main() -> coupled_wigner::Result<()> {
    let p = OscillatorParams::natural(0.1)?;
    for (k, l) in [(1, 0), (2, 1)] {
        let state = FockPairState::new(k, l, p);
        let rule = gauss_hermite(state.default_hermite_nodes())?;
        println!("(k, l) = ({k}, {l})");
        for i in 0..=8 {
            let t = f64::from(i) * PI / 16.0 / p.gamma();
            let s1 = linear_entropy(&WignerField::fock_marginal(&state, t, Mode::First), &rule)?;
            let mi = fock_mutual_information(&state, t, &rule)?;
            println!("  γt = {i}π/16   S1 = {s1:.6}   I = {mi:.6}");
        }
    }
    Ok(())
}
