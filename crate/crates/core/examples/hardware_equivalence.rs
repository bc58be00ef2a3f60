//! The beam-displacer layout, its element listing, and its agreement with the conceptual circuit.

use wptoolbox::hardware::{build_hardware_layout, equivalence_check, GridPoint};
use wptoolbox::toolbox::{detection_probabilities, MeasurementSetting, ToolboxPhases};

fn main() -> wptoolbox::Result<()> {
    let phases = ToolboxPhases::new(1.1, 0.4)?;
    let alpha = 0.6;
    for setting in [MeasurementSetting::ABSENT, MeasurementSetting::PRESENT] {
        let layout = build_hardware_layout(phases, setting)?;
        println!("{}", layout.listing());
        println!("hardware   {:?}", layout.detection_probabilities(alpha)?);
        println!(
            "conceptual {:?}",
            detection_probabilities(alpha, phases, setting).p
        );
        let points: Vec<GridPoint> = (0..50)
            .map(|k| GridPoint {
                alpha: k as f64 * 0.03,
                phases: ToolboxPhases::new(k as f64 * 0.37, k as f64 * 0.11).unwrap(),
            })
            .collect();
        let e = equivalence_check(&points, setting, true)?;
        println!("max deviation over 50 points: {:.2e}\n", e.max_deviation);
    }
    Ok(())
}
