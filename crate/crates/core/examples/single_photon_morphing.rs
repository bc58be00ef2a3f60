//! Detection probabilities as the preparation angle morphs the photon from wave to particle.

use wptoolbox::toolbox::{detection_probabilities, MeasurementSetting, ToolboxPhases};

fn main() -> wptoolbox::Result<()> {
    let phases = ToolboxPhases::new(0.0, 0.0)?;
    println!("alpha_deg      P1      P2      P3      P4");
    for k in 0..=9 {
        let alpha = k as f64 * 10f64.to_radians();
        let p = detection_probabilities(alpha, phases, MeasurementSetting::PRESENT).p;
        println!(
            "{:>9.0} {:>7.4} {:>7.4} {:>7.4} {:>7.4}",
            alpha.to_degrees(),
            p[0],
            p[1],
            p[2],
            p[3]
        );
    }
    Ok(())
}
