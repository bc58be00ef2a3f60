//! Sixteen coincidence probabilities at the four phase corners, with and without final splitters.

use std::f64::consts::PI;

use wptoolbox::entangle::{coincidence_probabilities, CoincidenceTable, TwoPhotonSettings};
use wptoolbox::toolbox::{MeasurementSetting, ToolboxPhases};

fn print(t: &CoincidenceTable) {
    for row in t.p {
        println!("    {}", row.map(|x| format!("{x:7.4}")).join(" "));
    }
}

fn main() -> wptoolbox::Result<()> {
    for setting in [MeasurementSetting::ABSENT, MeasurementSetting::PRESENT] {
        for (f1, f1p) in [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI)] {
            let s = TwoPhotonSettings::bell(
                ToolboxPhases::new(f1, 0.0)?,
                ToolboxPhases::new(f1p, 0.0)?,
            )
            .with_settings(setting, setting);
            println!(
                "beta={:.1}° phi1={:.0}° phi1'={:.0}° (rows n=1..4, columns n'=1'..4')",
                setting.beta.to_degrees(),
                f1.to_degrees(),
                f1p.to_degrees()
            );
            print(&coincidence_probabilities(&s));
        }
    }
    Ok(())
}
