//! Coherence witness |P1 - P2| for the pure superposition and for the incoherent mixture.

use std::f64::consts::FRAC_PI_2;

use wptoolbox::qcore::measure_each;
use wptoolbox::toolbox::{
    coherence, coherence_witness, detection_probabilities, mixed_output, MeasurementSetting,
    ToolboxPhases,
};

fn main() -> wptoolbox::Result<()> {
    let phases = ToolboxPhases::new(0.0, 0.0)?;
    println!("alpha_deg  sin2a   W_C(pure)  W_C(mixed)");
    for k in 0..=6 {
        let alpha = k as f64 * FRAC_PI_2 / 6.0;
        let pure = coherence_witness(&detection_probabilities(
            alpha,
            phases,
            MeasurementSetting::PRESENT,
        ));
        let p = measure_each(&mixed_output(alpha, phases)).p;
        println!(
            "{:>9.0} {:>6.4} {:>10.6} {:>11.2e}",
            alpha.to_degrees(),
            coherence(alpha),
            pure,
            (p[0] - p[1]).abs()
        );
    }
    Ok(())
}
