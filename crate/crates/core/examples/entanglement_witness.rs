//! Entanglement witness P_22' - P_21' and concurrence across the preparation angle.

use std::f64::consts::{FRAC_PI_2, TAU};

use wptoolbox::entangle::{
    coincidence_probabilities, concurrence, density_concurrence, entanglement_witness,
    two_photon_mixture, TwoPhotonSettings,
};
use wptoolbox::toolbox::ToolboxPhases;

fn main() -> wptoolbox::Result<()> {
    let zero = ToolboxPhases::new(0.0, 0.0)?;
    println!("phi1_deg  W_E");
    for k in 0..=8 {
        let phi1 = k as f64 * TAU / 8.0;
        let s = TwoPhotonSettings::bell(ToolboxPhases::new(phi1, 0.0)?, zero);
        println!(
            "{:>8.0}  {:.6}",
            phi1.to_degrees(),
            entanglement_witness(&coincidence_probabilities(&s))
        );
    }
    println!("alpha_deg  C(pure)  C(mixture)");
    for k in 0..=6 {
        let alpha = k as f64 * FRAC_PI_2 / 6.0;
        let s = TwoPhotonSettings::bell(zero, zero).with_alpha(alpha);
        let mixed = density_concurrence(&two_photon_mixture(&s), &s)?;
        println!(
            "{:>9.0}  {:.6}  {:.2e}",
            alpha.to_degrees(),
            concurrence(&s)?,
            mixed
        );
    }
    Ok(())
}
