//! The bulk-optics realization of the toolbox: beam-displacing prisms, half-wave
//! plates and liquid-crystal phase retarders acting on polarization ⊗ spatial
//! mode, and a check that it reproduces the conceptual circuit's statistics.
//!
//! Labels are `V0, H0, V1, H1, …, V4, H4`: rail then spatial mode. The photon
//! enters in mode 0; the detectors read `V1, H1, V3, H3` as `D1..D4`.
//!
//! Conventions: a half-wave plate at θ acts as `[[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]`
//! on `(V, H)`. The first liquid crystal carries a fixed π zero point on top
//! of φ1; with the listed plate angles that offset is what closes the wave arm
//! with the same fringe sign as the conceptual circuit.

use std::f64::consts::{FRAC_PI_8, PI};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optics::{self, Circuit, ElementUnitary, ToolboxStage};
use crate::qcore::{Amplitude, ModeBasis, PureState};
use crate::toolbox::{self, MeasurementSetting, ToolboxPhases};

/// Number of spatial modes in the layout.
pub const SPATIAL_MODES: usize = 5;

/// Fixed plate angles HWP1..HWP7 in degrees.
pub const HWP_ANGLES_DEG: [f64; 7] = [45.0, 22.5, 22.5, 45.0, 0.0, 0.0, 45.0];

/// Zero-point phase of the first liquid crystal.
pub const LC1_OFFSET: f64 = PI;

/// Hardware labels read by detectors `D1..D4`.
pub const DETECTOR_MODES: [&str; 4] = ["V1", "H1", "V3", "H3"];

/// Tolerance on output-distribution agreement.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

fn re(x: f64) -> Amplitude {
    Complex64::new(x, 0.0)
}

fn label(pol: char, mode: usize) -> String {
    format!("{pol}{mode}")
}

/// The polarization ⊗ spatial basis `V0, H0, …`.
pub fn hardware_basis() -> ModeBasis {
    ModeBasis::new((0..SPATIAL_MODES).flat_map(|m| [label('V', m), label('H', m)]))
        .expect("distinct labels")
}

/// Half-wave plate Jones matrix at axis angle `theta`, on rails `(V, H)`.
pub fn hwp_matrix(theta: f64) -> DMatrix<Amplitude> {
    let (s, c) = (2.0 * theta).sin_cos();
    DMatrix::from_row_slice(2, 2, &[re(c), re(s), re(s), re(-c)])
}

/// Half-wave plate on the canonical polarization rails `V`, `H`.
pub fn hwp_jones(theta: f64) -> Result<ElementUnitary> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("plate angle"));
    }
    ElementUnitary::new("HWP", &["V", "H"], hwp_matrix(theta))
}

/// Half-wave plate on one spatial mode of the hardware basis.
pub fn hwp_on_mode(name: &str, theta: f64, mode: usize) -> Result<ElementUnitary> {
    let v = label('V', mode);
    let h = label('H', mode);
    Ok(hwp_jones(theta)?
        .relabeled(|m| if m == "V" { v.clone() } else { h.clone() })
        .renamed(name))
}

/// Permutation unitary routing each `(from, to)` pair. Labels not named as
/// sources stay put when their own slot is free; the rest fill the remaining
/// slots in basis order.
pub fn beam_displacer(
    name: &str,
    basis: &ModeBasis,
    spatial_map: &[(String, String)],
) -> Result<ElementUnitary> {
    let d = basis.dim();
    let mut target: Vec<Option<usize>> = vec![None; d];
    let mut used = vec![false; d];
    for (from, to) in spatial_map {
        let i = basis.index_of(from)?;
        let j = basis.index_of(to)?;
        if target[i].is_some() {
            return Err(Error::NonInjective(from.clone()));
        }
        if used[j] {
            return Err(Error::NonInjective(to.clone()));
        }
        target[i] = Some(j);
        used[j] = true;
    }
    // untouched modes pass straight through where possible
    for i in 0..d {
        if target[i].is_none() && !used[i] {
            target[i] = Some(i);
            used[i] = true;
        }
    }
    let mut free = (0..d).filter(|j| !used[*j]);
    let mut m = DMatrix::from_element(d, d, re(0.0));
    for (i, t) in target.iter().enumerate() {
        let j = match t {
            Some(j) => *j,
            None => free.next().expect("as many free targets as free sources"),
        };
        m[(j, i)] = re(1.0);
    }
    let labels: Vec<&str> = basis.labels().iter().map(String::as_str).collect();
    ElementUnitary::new(name, &labels, m)
}

/// Displacer moving rail `pol` from mode `m` to `m + shift`.
pub fn rail_displacer(name: &str, pol: char, shift: usize) -> Result<ElementUnitary> {
    let map: Vec<(String, String)> = (0..SPATIAL_MODES.saturating_sub(shift))
        .map(|m| (label(pol, m), label(pol, m + shift)))
        .collect();
    beam_displacer(name, &hardware_basis(), &map)
}

fn lc(name: &str, mode: usize, phase: f64) -> Result<ElementUnitary> {
    Ok(optics::phase_shifter(&label('V', mode), phase)?.renamed(name))
}

/// The physical layout for one choice of phases and output plate angle.
#[derive(Clone, Debug)]
pub struct HardwareLayout {
    /// HWP1..HWP7 in radians.
    pub hwp_angles: [f64; 7],
    /// HWP8, the measurement setting.
    pub beta: f64,
    /// Liquid-crystal phases `(φ1, φ2)`, without the fixed zero point.
    pub lc_phases: (f64, f64),
    circuit: Circuit,
}

impl HardwareLayout {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn elements(&self) -> &[ElementUnitary] {
        self.circuit.elements()
    }

    /// Input `cos α|V0⟩ + sin α|H0⟩`.
    pub fn input_state(alpha: f64) -> PureState {
        let (s, c) = alpha.sin_cos();
        PureState::from_terms(&hardware_basis(), &[("V0", re(c)), ("H0", re(s))])
            .expect("known labels")
    }

    pub fn output_state(&self, alpha: f64) -> Result<PureState> {
        self.circuit.propagate(&Self::input_state(alpha))
    }

    /// Output amplitudes on `D1..D4`.
    pub fn detector_amplitudes(&self, alpha: f64) -> Result<[Amplitude; 4]> {
        let out = self.output_state(alpha)?;
        let mut a = [re(0.0); 4];
        for (x, m) in a.iter_mut().zip(DETECTOR_MODES) {
            *x = out.amplitude(m)?;
        }
        Ok(a)
    }

    pub fn detection_probabilities(&self, alpha: f64) -> Result<[f64; 4]> {
        Ok(self.detector_amplitudes(alpha)?.map(|a| a.norm_sqr()))
    }

    /// Human-readable element list: order, angles in degrees, phases in radians.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        let deg = |r: f64| r.to_degrees();
        let a = self.hwp_angles;
        let lines = [
            "BD1   H: mode m -> m+1".to_string(),
            format!("HWP1  {:>6.2} deg  mode 1", deg(a[0])),
            format!("HWP2  {:>6.2} deg  modes 0, 1", deg(a[1])),
            format!(
                "LC1   phi1 = {:.6} rad (+ {:.6} rad zero point)  V0",
                self.lc_phases.0, LC1_OFFSET
            ),
            format!("LC2   phi2 = {:.6} rad  V1", self.lc_phases.1),
            format!("HWP3  {:>6.2} deg  mode 0", deg(a[2])),
            "BD2   V: mode m -> m+2".to_string(),
            format!("HWP4  {:>6.2} deg  mode 0", deg(a[3])),
            format!("HWP5  {:>6.2} deg  mode 1", deg(a[4])),
            format!("HWP6  {:>6.2} deg  mode 2", deg(a[5])),
            format!("HWP7  {:>6.2} deg  mode 3", deg(a[6])),
            "BD3   V: mode m -> m+1".to_string(),
            format!("HWP8  {:>6.2} deg  all modes (beta)", deg(self.beta)),
            "PBS   D1 = V1, D2 = H1, D3 = V3, D4 = H3".to_string(),
        ];
        for (i, l) in lines.iter().enumerate() {
            let _ = writeln!(s, "{:>2}. {l}", i + 1);
        }
        s
    }
}

/// Builds the layout with the fixed plate angles.
pub fn build_hardware_layout(
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<HardwareLayout> {
    let a = HWP_ANGLES_DEG.map(f64::to_radians);
    let beta = setting.beta;
    let mut c = Circuit::new(hardware_basis())
        .then(rail_displacer("BD1", 'H', 1))?
        .then(hwp_on_mode("HWP1", a[0], 1))?
        .then(hwp_on_mode("HWP2", a[1], 0))?
        .then(hwp_on_mode("HWP2", a[1], 1))?
        .then(lc("LC1", 0, phases.phi1 + LC1_OFFSET))?
        .then(lc("LC2", 1, phases.phi2))?
        .then(hwp_on_mode("HWP3", a[2], 0))?
        .then(rail_displacer("BD2", 'V', 2))?
        .then(hwp_on_mode("HWP4", a[3], 0))?
        .then(hwp_on_mode("HWP5", a[4], 1))?
        .then(hwp_on_mode("HWP6", a[5], 2))?
        .then(hwp_on_mode("HWP7", a[6], 3))?
        .then(rail_displacer("BD3", 'V', 1))?;
    for m in 0..SPATIAL_MODES {
        c = c.then(hwp_on_mode("HWP8", beta, m))?;
    }
    Ok(HardwareLayout {
        hwp_angles: a,
        beta,
        lc_phases: (phases.phi1, phases.phi2),
        circuit: c,
    })
}

/// One parameter point of an equivalence grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub alpha: f64,
    pub phases: ToolboxPhases,
}

/// Worst disagreement found by [`equivalence_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Equivalence {
    /// Largest `|P_conceptual − P_hardware|` over points and detectors.
    pub max_deviation: f64,
    /// Largest amplitude mismatch after removing one global phase per point.
    /// Reported only; the layout agrees up to per-detector phases.
    pub max_amplitude_deviation: f64,
}

/// Compares detector statistics of the conceptual circuit and the layout.
///
/// With `strict`, settings other than β ∈ {0, π/8} are rejected.
pub fn equivalence_check(
    points: &[GridPoint],
    setting: MeasurementSetting,
    strict: bool,
) -> Result<Equivalence> {
    if strict && !setting.is_validated() {
        return Err(Error::UnvalidatedBeta(setting.beta));
    }
    let per_point: Vec<(f64, f64)> = points
        .par_iter()
        .map(|pt| -> Result<(f64, f64)> {
            let conceptual = optics::toolbox_circuit(
                pt.phases.phi1,
                pt.phases.phi2,
                setting.beta,
                0,
                ToolboxStage::Full,
            )?
            .propagate(&toolbox::prepare_input(pt.alpha))?;
            let hw = build_hardware_layout(pt.phases, setting)?.detector_amplitudes(pt.alpha)?;
            let ca = conceptual.amplitudes();
            let dist = ca
                .iter()
                .zip(&hw)
                .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
                .fold(0.0, f64::max);
            let overlap: Amplitude = hw.iter().zip(ca).map(|(b, a)| b.conj() * a).sum();
            let phase = if overlap.norm() > 0.0 {
                overlap / overlap.norm()
            } else {
                re(1.0)
            };
            let amp = ca
                .iter()
                .zip(&hw)
                .map(|(a, b)| (a - b * phase).norm())
                .fold(0.0, f64::max);
            Ok((dist, amp))
        })
        .collect::<Result<_>>()?;
    Ok(per_point.iter().fold(
        Equivalence {
            max_deviation: 0.0,
            max_amplitude_deviation: 0.0,
        },
        |acc, (d, a)| Equivalence {
            max_deviation: acc.max_deviation.max(*d),
            max_amplitude_deviation: acc.max_amplitude_deviation.max(*a),
        },
    ))
}

/// The validated output plate settings.
pub const VALIDATED_BETAS: [f64; 2] = [0.0, FRAC_PI_8];

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    const TOL: f64 = 1e-12;

    fn ph(a: f64, b: f64) -> ToolboxPhases {
        ToolboxPhases::new(a, b).unwrap()
    }

    #[test]
    fn plate_conventions() {
        let m = hwp_matrix(0.0);
        assert_eq!(m[(0, 0)], re(1.0));
        assert_eq!(m[(1, 1)], re(-1.0));
        let m = hwp_matrix(FRAC_PI_4);
        assert!((m[(1, 0)] - re(1.0)).norm() < TOL && (m[(0, 1)] - re(1.0)).norm() < TOL);
        assert!(m[(0, 0)].norm() < TOL);
        let m = hwp_matrix(FRAC_PI_8);
        assert!((m[(0, 0)] - re(FRAC_1_SQRT_2)).norm() < TOL);
        assert!((m[(1, 0)] - re(FRAC_1_SQRT_2)).norm() < TOL);
    }

    #[test]
    fn first_displacer_separates_rails() {
        let bd = rail_displacer("BD1", 'H', 1).unwrap();
        let s = HardwareLayout::input_state(0.4);
        let out = crate::qcore::apply_unitary(&bd, &s).unwrap();
        assert!((out.amplitude("V0").unwrap() - re(0.4f64.cos())).norm() < TOL);
        assert!((out.amplitude("H1").unwrap() - re(0.4f64.sin())).norm() < TOL);
        assert_eq!(out.amplitude("H0").unwrap(), re(0.0));
    }

    #[test]
    fn displacer_round_trip() {
        let bd = rail_displacer("BD2", 'V', 2).unwrap();
        let prod = bd.adjoint().matrix() * bd.matrix();
        let id = DMatrix::<Amplitude>::identity(10, 10);
        assert!((prod - id).iter().all(|a| a.norm() < TOL));
    }

    #[test]
    fn non_injective_map_rejected() {
        let map = vec![
            ("V0".to_string(), "V2".to_string()),
            ("V1".to_string(), "V2".to_string()),
        ];
        assert_eq!(
            beam_displacer("BD", &hardware_basis(), &map).unwrap_err(),
            Error::NonInjective("V2".into())
        );
    }

    #[test]
    fn anchored_points() {
        let l = build_hardware_layout(ph(0.0, 0.0), MeasurementSetting::PRESENT).unwrap();
        let p = l.detection_probabilities(0.0).unwrap();
        for (a, b) in p.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        for phi2 in [0.0, 1.0, 2.5] {
            let l = build_hardware_layout(ph(0.8, phi2), MeasurementSetting::PRESENT).unwrap();
            for x in l.detection_probabilities(FRAC_PI_2).unwrap() {
                assert!((x - 0.25).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn composed_layout_is_unitary() {
        let l = build_hardware_layout(ph(1.0, 2.0), MeasurementSetting::PRESENT).unwrap();
        let t = l.circuit().transfer_matrix().unwrap();
        assert!(optics::unitarity_defect(&t) < TOL);
    }

    #[test]
    fn equivalence_on_small_grid() {
        let pts: Vec<GridPoint> = [(0.2, 0.3, 1.1), (1.0, 4.0, 2.0), (0.7, 5.5, 0.1)]
            .iter()
            .map(|&(alpha, a, b)| GridPoint {
                alpha,
                phases: ph(a, b),
            })
            .collect();
        for s in [MeasurementSetting::PRESENT, MeasurementSetting::ABSENT] {
            let e = equivalence_check(&pts, s, true).unwrap();
            assert!(e.max_deviation < EQUIVALENCE_TOL, "{e:?}");
        }
    }

    #[test]
    fn strict_mode_rejects_unvalidated_beta() {
        let s = MeasurementSetting::new(0.3).unwrap();
        assert_eq!(
            equivalence_check(&[], s, true).unwrap_err(),
            Error::UnvalidatedBeta(0.3)
        );
        assert!(equivalence_check(&[], s, false).is_ok());
    }

    #[test]
    fn listing_names_every_plate() {
        let l = build_hardware_layout(ph(0.0, 0.0), MeasurementSetting::PRESENT).unwrap();
        let text = l.listing();
        for n in 1..=8 {
            assert!(text.contains(&format!("HWP{n}")));
        }
        assert!(text.contains("22.50 deg"));
    }
}
