//! The single-photon wave-particle toolbox.
//!
//! A polarization qubit `cos α|V⟩ + sin α|H⟩` is converted to path and sent
//! through a complete interferometer (wave arm, paths 1 and 3) and an
//! incomplete one (particle arm, paths 2 and 4). The final splitters, set by
//! β, decide whether the two arms interfere at the detectors.
//!
//! Everything here is computed in closed form. The same quantities obtained by
//! propagating through [`crate::optics::toolbox_circuit`] are available via the
//! `*_propagated` functions, and the two routes are tested against each other.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::{self, ToolboxStage};
use crate::qcore::{mix, Amplitude, DensityMatrix, ModeBasis, PureState};

/// Detector indices (0-based) of the wave-like outputs when β = 0.
pub const WAVE_DETECTORS: [usize; 2] = [0, 2];
/// Detector indices (0-based) of the particle-like outputs when β = 0.
pub const PARTICLE_DETECTORS: [usize; 2] = [1, 3];

/// Preparation angle α, reduced into `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreparationAngle(f64);

impl PreparationAngle {
    /// Values outside `[0, π/2]` are reduced modulo π (a global sign on the
    /// state); anything still above π/2 is kept but logged.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("α"));
        }
        let mut a = alpha.rem_euclid(PI);
        if a >= PI - 1e-15 {
            a = 0.0;
        }
        if a > FRAC_PI_2 + 1e-15 {
            log::warn!("α = {alpha} rad lies outside the [0, π/2] morphing range");
        } else if (a - alpha).abs() > 1e-15 {
            log::warn!("α = {alpha} rad reduced to {a} rad");
        }
        Ok(Self(a))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Internal phases φ1 (wave arm, path 3) and φ2 (particle arm, path 4).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ToolboxPhases {
    pub phi1: f64,
    pub phi2: f64,
}

impl ToolboxPhases {
    pub fn new(phi1: f64, phi2: f64) -> Result<Self> {
        if !phi1.is_finite() || !phi2.is_finite() {
            return Err(Error::NonFinite("toolbox phase"));
        }
        Ok(Self { phi1, phi2 })
    }
}

/// Output plate setting β: π/8 (22.5°) inserts the final splitters, 0 removes them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementSetting {
    pub beta: f64,
}

impl MeasurementSetting {
    pub const PRESENT: Self = Self { beta: FRAC_PI_8 };
    pub const ABSENT: Self = Self { beta: 0.0 };

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::NonFinite("β"));
        }
        Ok(Self { beta })
    }

    pub fn splitters_present(self) -> bool {
        (self.beta - FRAC_PI_8).abs() < 1e-15
    }

    pub fn splitters_absent(self) -> bool {
        self.beta == 0.0
    }

    pub fn is_validated(self) -> bool {
        self.splitters_present() || self.splitters_absent()
    }
}

impl Default for MeasurementSetting {
    fn default() -> Self {
        Self::PRESENT
    }
}

/// The four terms behind the detection probabilities with splitters present.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferenceTerms {
    pub pc: f64,
    pub ps: f64,
    pub ic: f64,
    pub is_: f64,
}

/// Detection probabilities `P_1..P_4`. `terms` is set when the final
/// splitters are present; then `p = (pc+ic, pc−ic, ps+is, ps−is)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleProbabilities {
    pub p: [f64; 4],
    pub terms: Option<InterferenceTerms>,
}

impl SingleProbabilities {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// A distribution split into the part that survives dephasing and the part
/// produced by interference between the wave and particle components.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposedDistribution {
    pub incoherent: Vec<f64>,
    pub interference: Vec<f64>,
}

impl DecomposedDistribution {
    pub fn combined(&self) -> Vec<f64> {
        self.incoherent
            .iter()
            .zip(&self.interference)
            .map(|(a, b)| a + b)
            .collect()
    }
}

fn re(x: f64) -> Amplitude {
    Complex64::new(x, 0.0)
}

fn path_labels(primes: usize) -> [String; 4] {
    let t = "'".repeat(primes);
    [1, 2, 3, 4].map(|n| format!("{n}{t}"))
}

fn state4(amps: [Amplitude; 4], primes: usize) -> PureState {
    PureState::new(ModeBasis::paths(primes), amps.to_vec()).expect("four finite amplitudes")
}

/// `cos α|V⟩ + sin α|H⟩`.
pub fn prepare_input(alpha: f64) -> PureState {
    prepare_input_on(alpha, 0)
}

pub fn prepare_input_on(alpha: f64, primes: usize) -> PureState {
    let (s, c) = alpha.sin_cos();
    PureState::new(ModeBasis::polarization(primes), vec![re(c), re(s)]).expect("finite amplitudes")
}

/// `e^{iφ1/2}/√2 [cos(φ1/2)(|1⟩+|2⟩) − i sin(φ1/2)(|3⟩+|4⟩)]`.
pub fn wave_state(phi1: f64) -> PureState {
    wave_component(phi1, MeasurementSetting::PRESENT, 0)
}

/// `½(|1⟩ − |2⟩ + e^{iφ2}|3⟩ − e^{iφ2}|4⟩)`.
pub fn particle_state(phi2: f64) -> PureState {
    particle_component(phi2, MeasurementSetting::PRESENT, 0)
}

/// Amplitudes of the final splitter `(first, second) → (c·a + s·b, d·(s·a − c·b))`
/// with `c = cos 2β`, `s = sin 2β`, `d = −e^{8iβ}`.
fn final_splitter(a: Amplitude, b: Amplitude, beta: f64) -> (Amplitude, Amplitude) {
    let (s, c) = (2.0 * beta).sin_cos();
    let d = -Complex64::from_polar(1.0, 8.0 * beta);
    (a * c + b * s, d * (a * s - b * c))
}

/// Wave component of the toolbox output at setting β (unit norm).
pub fn wave_component(phi1: f64, setting: MeasurementSetting, primes: usize) -> PureState {
    let g = Complex64::from_polar(1.0, phi1 / 2.0);
    let (sh, ch) = (phi1 / 2.0).sin_cos();
    if setting.splitters_present() {
        let a = g * FRAC_1_SQRT_2 * ch;
        let b = g * Complex64::new(0.0, -FRAC_1_SQRT_2 * sh);
        return state4([a, a, b, b], primes);
    }
    let w1 = g * ch;
    let w3 = g * Complex64::new(0.0, -sh);
    let zero = re(0.0);
    let (o1, o2) = final_splitter(w1, zero, setting.beta);
    let (o3, o4) = final_splitter(w3, zero, setting.beta);
    state4([o1, o2, o3, o4], primes)
}

/// Particle component of the toolbox output at setting β (unit norm).
pub fn particle_component(phi2: f64, setting: MeasurementSetting, primes: usize) -> PureState {
    let e = Complex64::from_polar(1.0, phi2);
    if setting.splitters_present() {
        return state4([re(0.5), re(-0.5), e * 0.5, -e * 0.5], primes);
    }
    let zero = re(0.0);
    let (o1, o2) = final_splitter(zero, re(FRAC_1_SQRT_2), setting.beta);
    let (o3, o4) = final_splitter(zero, e * FRAC_1_SQRT_2, setting.beta);
    state4([o1, o2, o3, o4], primes)
}

/// `cos α · wave + sin α · particle` at setting β. With the splitters removed
/// this is the recombined-stage state.
pub fn output_state(alpha: f64, phases: ToolboxPhases, setting: MeasurementSetting) -> PureState {
    output_state_on(alpha, phases, setting, 0)
}

pub fn output_state_on(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
    primes: usize,
) -> PureState {
    let (s, c) = alpha.sin_cos();
    let w = wave_component(phases.phi1, setting, primes);
    let p = particle_component(phases.phi2, setting, primes);
    PureState::superpose(&[(re(c), &w), (re(s), &p)]).expect("shared basis")
}

/// Recombined-stage state (before the final splitters), written out term by term.
pub fn recombined_state(alpha: f64, phases: ToolboxPhases) -> PureState {
    let (s, c) = alpha.sin_cos();
    let g = Complex64::from_polar(1.0, phases.phi1 / 2.0);
    let (sh, ch) = (phases.phi1 / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, phases.phi2);
    state4(
        [
            g * c * ch,
            re(s * FRAC_1_SQRT_2),
            g * Complex64::new(0.0, -c * sh),
            e * s * FRAC_1_SQRT_2,
        ],
        0,
    )
}

/// Output obtained by propagating `prepare_input(α)` through the conceptual circuit.
pub fn output_state_propagated(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<PureState> {
    let c = optics::toolbox_circuit(
        phases.phi1,
        phases.phi2,
        setting.beta,
        0,
        ToolboxStage::Full,
    )?;
    c.propagate(&prepare_input(alpha))
}

/// `(𝒫_c, 𝒫_s, ℐ_c, ℐ_s)` of the splitters-present probabilities.
pub fn interference_terms(alpha: f64, phases: ToolboxPhases) -> InterferenceTerms {
    let (sa, ca) = alpha.sin_cos();
    let (sh, ch) = (phases.phi1 / 2.0).sin_cos();
    let k = (2.0 * alpha).sin() / (2.0 * 2f64.sqrt());
    InterferenceTerms {
        pc: 0.5 * ca * ca * ch * ch + 0.25 * sa * sa,
        ps: 0.5 * ca * ca * sh * sh + 0.25 * sa * sa,
        ic: k * ch * ch,
        is_: k * sh * (phases.phi1 / 2.0 - phases.phi2).sin(),
    }
}

/// Detection probabilities at each of the four outputs.
pub fn detection_probabilities(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> SingleProbabilities {
    if setting.splitters_present() {
        let t = interference_terms(alpha, phases);
        return SingleProbabilities {
            p: [t.pc + t.ic, t.pc - t.ic, t.ps + t.is_, t.ps - t.is_],
            terms: Some(t),
        };
    }
    if setting.splitters_absent() {
        let (sa, ca) = alpha.sin_cos();
        let (sh, ch) = (phases.phi1 / 2.0).sin_cos();
        let half_particle = 0.5 * sa * sa;
        return SingleProbabilities {
            p: [
                ca * ca * ch * ch,
                half_particle,
                ca * ca * sh * sh,
                half_particle,
            ],
            terms: None,
        };
    }
    let pops = output_state(alpha, phases, setting).populations();
    SingleProbabilities {
        p: [pops[0], pops[1], pops[2], pops[3]],
        terms: None,
    }
}

/// Detection probabilities split into incoherent and interference parts.
pub fn detection_decomposition(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> DecomposedDistribution {
    let (sa, ca) = alpha.sin_cos();
    let w = wave_component(phases.phi1, setting, 0);
    let p = particle_component(phases.phi2, setting, 0);
    let mut incoherent = Vec::with_capacity(4);
    let mut interference = Vec::with_capacity(4);
    for (a, b) in w.amplitudes().iter().zip(p.amplitudes()) {
        incoherent.push(ca * ca * a.norm_sqr() + sa * sa * b.norm_sqr());
        interference.push(2.0 * ca * sa * (a.conj() * b).re);
    }
    DecomposedDistribution {
        incoherent,
        interference,
    }
}

/// Coherence of the pure output in the {wave, particle} basis, `sin 2α`.
pub fn coherence(alpha: f64) -> f64 {
    (2.0 * alpha).sin().abs()
}

/// `Σ_{i≠j} |ρ_ij|` of `rho` compressed onto the {wave, particle} basis.
pub fn coherence_of(rho: &DensityMatrix, phases: ToolboxPhases) -> Result<f64> {
    let w = wave_state(phases.phi1);
    let p = particle_state(phases.phi2);
    let m = rho.compress(&[&w, &p])?;
    Ok(m[(0, 1)].norm() + m[(1, 0)].norm())
}

/// `W_C = |P_1 − P_2|`.
pub fn coherence_witness(p: &SingleProbabilities) -> f64 {
    (p.p[0] - p.p[1]).abs()
}

/// `cos²α |wave⟩⟨wave| + sin²α |particle⟩⟨particle|` with the final splitters present.
pub fn mixed_output(alpha: f64, phases: ToolboxPhases) -> DensityMatrix {
    mixed_output_at(alpha, phases, MeasurementSetting::PRESENT)
}

pub fn mixed_output_at(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> DensityMatrix {
    let (sa, ca) = alpha.sin_cos();
    let w = wave_component(phases.phi1, setting, 0);
    let p = particle_component(phases.phi2, setting, 0);
    mix(&[(w, ca * ca), (p, sa * sa)]).expect("orthogonal unit components")
}

/// Mixed output propagated from `cos²α|V⟩⟨V| + sin²α|H⟩⟨H|` through the circuit.
pub fn mixed_output_propagated(
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<DensityMatrix> {
    let (sa, ca) = alpha.sin_cos();
    let c = optics::toolbox_circuit(
        phases.phi1,
        phases.phi2,
        setting.beta,
        0,
        ToolboxStage::Full,
    )?;
    let pol = ModeBasis::polarization(0);
    let v = c.propagate(&PureState::basis_state(&pol, "V")?)?;
    let h = c.propagate(&PureState::basis_state(&pol, "H")?)?;
    mix(&[(v, ca * ca), (h, sa * sa)])
}

/// Detector labels for photon `primes`.
pub fn detector_labels(primes: usize) -> [String; 4] {
    path_labels(primes)
}
