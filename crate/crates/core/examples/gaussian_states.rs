//! Covariance-matrix states: Wigner values, fidelity, coherence, reduction.

use coupled_wigner::{fidelity, thermal_state, GaussianState, Mode};

fn main() -> coupled_wigner::Result<()> {
    let vacuum = GaussianState::vacuum(1)?;
    let hot = thermal_state(4.0)?;
    let coherent = GaussianState::coherent(2.0, 0.0)?;
    let displaced = GaussianState::displaced_thermal(1.0, 1.0, 4.0)?;

    println!("W_vac(0) = {:.7}", vacuum.wigner(&[0.0, 0.0])?);
    println!("F(vacuum, thermal 4) = {}", fidelity(&vacuum, &hot)?);
    println!("F(vacuum, coherent (2,0)) = {:.7}", fidelity(&vacuum, &coherent)?);
    for (name, s) in [("thermal 4", &hot), ("coherent (2,0)", &coherent), ("displaced thermal", &displaced)] {
        println!("{name:18} n = {:.3}  C = {:.7} bits", s.mean_photon()?, s.coherence()?);
    }

    let pair = GaussianState::product(&displaced, &coherent)?;
    println!("mode 2 of the product: {:?}", pair.reduce_mode(Mode::Second)?.to_record());
    println!("{}", serde_json::to_string(&pair.reduce_mode(Mode::First)?).expect("serializable"));
    Ok(())
}
