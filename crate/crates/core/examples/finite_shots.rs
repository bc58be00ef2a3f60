//! Sampled entanglement witness with Poissonian error bars, ideal and with reduced visibility.

use std::f64::consts::PI;

use wptoolbox::entangle::{coincidence_decomposition, TwoPhotonSettings};
use wptoolbox::shots::{apply_noise, estimate_witness, sample_counts, NoiseModel, Witness};
use wptoolbox::toolbox::ToolboxPhases;

fn main() -> wptoolbox::Result<()> {
    let zero = ToolboxPhases::new(0.0, 0.0)?;
    for visibility in [1.0, 0.8] {
        let noise = NoiseModel::new(visibility, 0.0)?;
        println!("visibility {visibility}");
        for phi1 in [0.0, PI / 2.0, PI] {
            let s = TwoPhotonSettings::bell(ToolboxPhases::new(phi1, 0.0)?, zero);
            let dist = apply_noise(&coincidence_decomposition(&s), noise);
            let counts = sample_counts(&dist, 100_000, 7)?;
            let w = estimate_witness(&counts, Witness::Entanglement)?;
            println!(
                "  phi1={:>3.0}°  W_E = {:.4} ± {:.4}  (exact {:.4})",
                phi1.to_degrees(),
                w.value,
                w.error,
                dist[5] - dist[4]
            );
        }
    }
    Ok(())
}
