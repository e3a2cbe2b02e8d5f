//! Mode 1 coupled to a thermal bath: integrator against the closed form at
//! γ = 0, then fidelity backflow once the modes are coupled.

use coupled_wigner::open_dynamics::{evolve_coupled, thermalize_closed_form, IntegratorOptions, ThermalBath};
use coupled_wigner::{GaussianState, Mode, OscillatorParams};

fn main() -> coupled_wigner::Result<()> {
    let bath = ThermalBath::new(0.1, 4.0)?;
    let mode = GaussianState::displaced_thermal(1.0, 1.0, 4.0)?;
    let initial = GaussianState::product(&mode, &mode)?;
    let times: Vec<f64> = (0..=600).map(|i| f64::from(i) * 0.1).collect();

    let free = evolve_coupled(&initial, &OscillatorParams::natural(0.0)?, &bath, &times, &IntegratorOptions::default())?;
    for i in [0, 100, 300, 600] {
        let got = free.states[i].reduce_mode(Mode::First)?;
        let want = thermalize_closed_form(&mode, &bath, times[i])?;
        println!("Γt = {:.0}: σ11 = {:.9}  closed form {:.9}", 0.1 * times[i], got.covariance()[(0, 0)], want.covariance()[(0, 0)]);
    }

    let coupled = evolve_coupled(&initial, &OscillatorParams::natural(0.1)?, &bath, &times, &IntegratorOptions::default())?;
    println!("backflow windows (t): {:?}", coupled.backflow_intervals);
    println!("final fidelity {:.6}, coherence {:.6} bits", coupled.fidelity_track[600], coupled.coherence_track[600]);
    Ok(())
}
