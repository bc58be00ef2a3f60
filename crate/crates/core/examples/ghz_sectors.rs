//! Wave/particle sector probabilities of the N-photon output without final splitters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use wptoolbox::entangle::ghz_sector_probabilities;
use wptoolbox::toolbox::{MeasurementSetting, ToolboxPhases};

fn main() -> wptoolbox::Result<()> {
    let phases = ToolboxPhases::new(FRAC_PI_2, 0.0)?;
    for n in 2..=5 {
        let t = ghz_sector_probabilities(n, FRAC_PI_4, phases, MeasurementSetting::ABSENT)?;
        println!(
            "n={n}: all-wave {:.4}, all-particle {:.4}, crossed {:.1e}, photon-1 marginal {:?}",
            t.all_wave(),
            t.all_particle(),
            t.crossed(),
            t.marginals[0]
        );
    }
    Ok(())
}
