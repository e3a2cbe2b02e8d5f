//! Stationary Wigner functions reproduce the energy spectrum via ⟨H⟩.

use coupled_wigner::info::{expectation_value, WignerField};
use coupled_wigner::{energy, gauss_hermite, OscillatorParams, PhasePoint};

fn main() -> coupled_wigner::Result<()> {
    let p = OscillatorParams::new(1.3, 0.9, 1.0, 0.25)?;
    let rule = gauss_hermite(12)?;
    println!("n1 n2      E        <H>");
    for (n1, n2) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)] {
        let w = WignerField::stationary(n1, n2, &p);
        let h = expectation_value(&w, |x| p.hamiltonian(&PhasePoint::from_slice(x)), &rule)?;
        println!("{n1}  {n2}   {:.6}  {h:.6}", energy(n1, n2, &p));
    }
    Ok(())
}
