//! Parallel toolboxes fed with polarization-entangled photons.
//!
//! Photon A uses unprimed labels, photon B primed ones. Coincidence tables are
//! row-major with photon A's detector as the row: `p[n-1][n'-1] = P_nn'`.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::{self, ToolboxStage};
use crate::qcore::{mix, tensor, tensor_all, Amplitude, DensityMatrix, ModeBasis, PureState};
use crate::toolbox::{
    self, particle_component, wave_component, DecomposedDistribution, MeasurementSetting,
    ToolboxPhases, PARTICLE_DETECTORS, WAVE_DETECTORS,
};

/// Largest photon count accepted by the N-photon functions (4^8 amplitudes).
pub const MAX_PHOTONS: usize = 8;

/// Tolerance for deciding that a state lies inside the wave/particle sector.
const SECTOR_TOL: f64 = 1e-10;

/// Parameters of the two-photon experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhotonSettings {
    pub alpha: f64,
    pub phases_a: ToolboxPhases,
    pub phases_b: ToolboxPhases,
    pub beta_a: MeasurementSetting,
    pub beta_b: MeasurementSetting,
}

impl TwoPhotonSettings {
    pub fn new(
        alpha: f64,
        phases_a: ToolboxPhases,
        phases_b: ToolboxPhases,
        beta_a: MeasurementSetting,
        beta_b: MeasurementSetting,
    ) -> Result<Self> {
        let all = [
            alpha,
            phases_a.phi1,
            phases_a.phi2,
            phases_b.phi1,
            phases_b.phi2,
            beta_a.beta,
            beta_b.beta,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("two-photon settings"));
        }
        Ok(Self {
            alpha,
            phases_a,
            phases_b,
            beta_a,
            beta_b,
        })
    }

    /// Maximally entangled input, splitters present on both sides.
    pub fn bell(phases_a: ToolboxPhases, phases_b: ToolboxPhases) -> Self {
        Self {
            alpha: FRAC_PI_4,
            phases_a,
            phases_b,
            beta_a: MeasurementSetting::PRESENT,
            beta_b: MeasurementSetting::PRESENT,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_settings(mut self, beta_a: MeasurementSetting, beta_b: MeasurementSetting) -> Self {
        self.beta_a = beta_a;
        self.beta_b = beta_b;
        self
    }
}

/// Sixteen coincidence probabilities `P_nn'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoincidenceTable {
    pub p: [[f64; 4]; 4],
}

impl CoincidenceTable {
    /// Born-rule table of a two-photon path state (photon A factor first).
    pub fn from_state(s: &PureState) -> Result<Self> {
        if s.dim() != 16 {
            return Err(Error::DimensionMismatch {
                expected: 16,
                got: s.dim(),
            });
        }
        Ok(Self::from_flat(&s.populations()))
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.basis().dim() != 16 {
            return Err(Error::DimensionMismatch {
                expected: 16,
                got: rho.basis().dim(),
            });
        }
        Ok(Self::from_flat(&rho.populations()))
    }

    fn from_flat(v: &[f64]) -> Self {
        let mut p = [[0.0; 4]; 4];
        for (i, x) in v.iter().enumerate() {
            p[i / 4][i % 4] = *x;
        }
        Self { p }
    }

    /// `P_nn'` with 1-based detector numbers.
    pub fn get(&self, n: usize, n_prime: usize) -> f64 {
        self.p[n - 1][n_prime - 1]
    }

    pub fn flat(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for (i, x) in out.iter_mut().enumerate() {
            *x = self.p[i / 4][i % 4];
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// Detection probabilities of photon A alone.
    pub fn marginal_a(&self) -> [f64; 4] {
        self.p.map(|row| row.iter().sum())
    }

    /// Detection probabilities of photon B alone.
    pub fn marginal_b(&self) -> [f64; 4] {
        let mut m = [0.0; 4];
        for row in &self.p {
            for (acc, x) in m.iter_mut().zip(row) {
                *acc += x;
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.flat()
            .iter()
            .zip(other.flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Labels `1⊗1'`, `1⊗2'`, … in row-major order.
    pub fn labels() -> Vec<String> {
        let a = toolbox::detector_labels(0);
        let b = toolbox::detector_labels(1);
        a.iter()
            .flat_map(|x| b.iter().map(move |y| format!("{x}⊗{y}")))
            .collect()
    }
}

fn re(x: f64) -> Amplitude {
    Complex64::new(x, 0.0)
}

/// `cos α|VV'⟩ + sin α|HH'⟩`.
pub fn prepare_entangled_input(alpha: f64) -> PureState {
    let (s, c) = alpha.sin_cos();
    let basis = ModeBasis::product(&ModeBasis::polarization(0), &ModeBasis::polarization(1))
        .expect("distinct labels");
    PureState::from_terms(&basis, &[("V⊗V'", re(c)), ("H⊗H'", re(s))]).expect("known labels")
}

/// `cos α|VH'⟩ + sin α|HV'⟩`.
pub fn prepare_swapped_input(alpha: f64) -> PureState {
    let (s, c) = alpha.sin_cos();
    let basis = ModeBasis::product(&ModeBasis::polarization(0), &ModeBasis::polarization(1))
        .expect("distinct labels");
    PureState::from_terms(&basis, &[("V⊗H'", re(c)), ("H⊗V'", re(s))]).expect("known labels")
}

/// The four product sector vectors `wave⊗wave'`, `wave⊗particle'`,
/// `particle⊗wave'`, `particle⊗particle'` at the settings' β values.
pub fn sector_basis(s: &TwoPhotonSettings) -> [PureState; 4] {
    let wa = wave_component(s.phases_a.phi1, s.beta_a, 0);
    let pa = particle_component(s.phases_a.phi2, s.beta_a, 0);
    let wb = wave_component(s.phases_b.phi1, s.beta_b, 1);
    let pb = particle_component(s.phases_b.phi2, s.beta_b, 1);
    [
        tensor(&wa, &wb),
        tensor(&wa, &pb),
        tensor(&pa, &wb),
        tensor(&pa, &pb),
    ]
}

/// `cos α|wave⟩|wave'⟩ + sin α|particle⟩|particle'⟩`.
pub fn two_photon_output(s: &TwoPhotonSettings) -> PureState {
    let (sa, ca) = s.alpha.sin_cos();
    let [ww, _, _, pp] = sector_basis(s);
    PureState::superpose(&[(re(ca), &ww), (re(sa), &pp)]).expect("shared basis")
}

fn local_maps(s: &TwoPhotonSettings) -> Result<[(DMatrix<Amplitude>, ModeBasis); 2]> {
    let a = optics::toolbox_circuit(
        s.phases_a.phi1,
        s.phases_a.phi2,
        s.beta_a.beta,
        0,
        ToolboxStage::Full,
    )?;
    let b = optics::toolbox_circuit(
        s.phases_b.phi1,
        s.phases_b.phi2,
        s.beta_b.beta,
        1,
        ToolboxStage::Full,
    )?;
    Ok([
        (a.transfer_matrix()?, a.output_basis().clone()),
        (b.transfer_matrix()?, b.output_basis().clone()),
    ])
}

fn propagate_pair(input: &PureState, s: &TwoPhotonSettings) -> Result<PureState> {
    let [(ta, ba), (tb, bb)] = local_maps(s)?;
    input.apply_local(0, &ta, &ba)?.apply_local(1, &tb, &bb)
}

/// Two-photon output obtained by sending each photon through its own circuit.
pub fn two_photon_output_propagated(s: &TwoPhotonSettings) -> Result<PureState> {
    propagate_pair(&prepare_entangled_input(s.alpha), s)
}

/// `cos²α |wave,wave'⟩⟨…| + sin²α |particle,particle'⟩⟨…|`.
pub fn two_photon_mixture(s: &TwoPhotonSettings) -> DensityMatrix {
    let (sa, ca) = s.alpha.sin_cos();
    let [ww, _, _, pp] = sector_basis(s);
    mix(&[(ww, ca * ca), (pp, sa * sa)]).expect("orthonormal sectors")
}

/// The sixteen closed forms with splitters present on both photons.
fn coincidences_present(s: &TwoPhotonSettings) -> CoincidenceTable {
    let (sa, ca) = s.alpha.sin_cos();
    let a = 0.25 * ca * ca;
    let b = sa * sa / 16.0;
    let k = (2.0 * s.alpha).sin() / 8.0;
    let (h, hp) = (s.phases_a.phi1 / 2.0, s.phases_b.phi1 / 2.0);
    let (sh, ch) = h.sin_cos();
    let (shp, chp) = hp.sin_cos();
    let m = h + hp;
    let (phi2, phi2p) = (s.phases_a.phi2, s.phases_b.phi2);
    let mut p = [[0.0; 4]; 4];

    let x = a * ch * ch * chp * chp + b;
    let y = k * ch * chp * m.cos();
    p[0][0] = x + y;
    p[1][1] = x + y;
    p[0][1] = x - y;
    p[1][0] = x - y;

    let x = a * ch * ch * shp * shp + b;
    let y = k * ch * shp * (phi2p - m).sin();
    p[0][2] = x - y;
    p[1][3] = x - y;
    p[0][3] = x + y;
    p[1][2] = x + y;

    let x = a * sh * sh * chp * chp + b;
    let y = k * sh * chp * (phi2 - m).sin();
    p[2][0] = x - y;
    p[3][1] = x - y;
    p[2][1] = x + y;
    p[3][0] = x + y;

    let x = a * sh * sh * shp * shp + b;
    let y = k * sh * shp * (phi2 + phi2p - m).cos();
    p[2][2] = x - y;
    p[3][3] = x - y;
    p[2][3] = x + y;
    p[3][2] = x + y;

    CoincidenceTable { p }
}

/// Wave, particle and crossed blocks with the splitters removed on both photons.
fn coincidences_absent(s: &TwoPhotonSettings) -> CoincidenceTable {
    let (sa, ca) = s.alpha.sin_cos();
    let (sh, ch) = (s.phases_a.phi1 / 2.0).sin_cos();
    let (shp, chp) = (s.phases_b.phi1 / 2.0).sin_cos();
    let w = ca * ca;
    let q = sa * sa / 4.0;
    let mut p = [[0.0; 4]; 4];
    p[0][0] = w * ch * ch * chp * chp;
    p[0][2] = w * ch * ch * shp * shp;
    p[2][0] = w * sh * sh * chp * chp;
    p[2][2] = w * sh * sh * shp * shp;
    for i in PARTICLE_DETECTORS {
        for j in PARTICLE_DETECTORS {
            p[i][j] = q;
        }
    }
    CoincidenceTable { p }
}

/// Coincidence probabilities `P_nn'`.
///
/// Closed forms are used when both photons share a validated setting; mixed or
/// intermediate settings fall back to the Born rule on [`two_photon_output`].
pub fn coincidence_probabilities(s: &TwoPhotonSettings) -> CoincidenceTable {
    if s.beta_a.splitters_present() && s.beta_b.splitters_present() {
        coincidences_present(s)
    } else if s.beta_a.splitters_absent() && s.beta_b.splitters_absent() {
        coincidences_absent(s)
    } else {
        CoincidenceTable::from_state(&two_photon_output(s)).expect("16-dimensional output")
    }
}

/// Coincidence probabilities (row-major) split into incoherent and interference parts.
pub fn coincidence_decomposition(s: &TwoPhotonSettings) -> DecomposedDistribution {
    let (sa, ca) = s.alpha.sin_cos();
    let [ww, _, _, pp] = sector_basis(s);
    let mut incoherent = Vec::with_capacity(16);
    let mut interference = Vec::with_capacity(16);
    for (a, b) in ww.amplitudes().iter().zip(pp.amplitudes()) {
        incoherent.push(ca * ca * a.norm_sqr() + sa * sa * b.norm_sqr());
        interference.push(2.0 * ca * sa * (a.conj() * b).re);
    }
    DecomposedDistribution {
        incoherent,
        interference,
    }
}

/// `W_E = P_22' − P_21'`.
pub fn entanglement_witness(t: &CoincidenceTable) -> f64 {
    t.p[1][1] - t.p[1][0]
}

/// `W_E` with splitters present on both photons:
/// `¼ sin 2α cos(φ1/2) cos(φ1'/2) cos((φ1+φ1')/2)`.
pub fn entanglement_witness_closed(alpha: f64, phi1: f64, phi1_prime: f64) -> f64 {
    0.25 * (2.0 * alpha).sin()
        * (phi1 / 2.0).cos()
        * (phi1_prime / 2.0).cos()
        * ((phi1 + phi1_prime) / 2.0).cos()
}

/// Sector amplitudes `(⟨ww'|ψ⟩, ⟨wp'|ψ⟩, ⟨pw'|ψ⟩, ⟨pp'|ψ⟩)`; rejects states
/// with weight outside the sector.
pub fn sector_amplitudes(state: &PureState, s: &TwoPhotonSettings) -> Result<[Amplitude; 4]> {
    let sectors = sector_basis(s);
    let mut out = [re(0.0); 4];
    for (o, v) in out.iter_mut().zip(&sectors) {
        *o = v.inner(state)?;
    }
    let inside: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    let outside = state.norm_sqr() - inside;
    if outside.abs() > SECTOR_TOL {
        return Err(Error::NotExpressible(outside));
    }
    Ok(out)
}

/// Concurrence `2|ad − bc|` of a pure two-photon state in the wave/particle basis.
pub fn state_concurrence(state: &PureState, s: &TwoPhotonSettings) -> Result<f64> {
    let [a, b, c, d] = sector_amplitudes(state, s)?;
    Ok(2.0 * (a * d - b * c).norm() / state.norm_sqr())
}

/// Concurrence of the pure two-photon output; `sin 2α` in exact arithmetic.
pub fn concurrence(s: &TwoPhotonSettings) -> Result<f64> {
    state_concurrence(&two_photon_output(s), s)
}

/// Concurrence of a two-photon density matrix in the wave/particle basis.
pub fn density_concurrence(rho: &DensityMatrix, s: &TwoPhotonSettings) -> Result<f64> {
    let sectors = sector_basis(s);
    let refs: Vec<&PureState> = sectors.iter().collect();
    let m = rho.compress(&refs)?;
    let captured = m.trace().re;
    if (captured - 1.0).abs() > SECTOR_TOL {
        return Err(Error::NotExpressible(1.0 - captured));
    }
    Ok(wootters(&m))
}

/// Two-qubit concurrence `max(0, λ1 − λ2 − λ3 − λ4)`.
///
/// The λ are the singular values of `Aᵀ(σy⊗σy)A` for any `ρ = AA†`, which
/// equal the square roots of the eigenvalues of `ρ(σy⊗σy)ρ*(σy⊗σy)`.
pub fn wootters(rho: &DMatrix<Amplitude>) -> f64 {
    assert_eq!(rho.shape(), (4, 4), "two-qubit density matrix");
    let eig = SymmetricEigen::new(rho.clone());
    let mut a = eig.eigenvectors.clone();
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        // drop round-off eigenvalues so a pure state stays exactly rank one
        let w = if lam > 1e-13 { lam.sqrt() } else { 0.0 };
        a.column_mut(j).scale_mut(w);
    }
    let mut yy = DMatrix::from_element(4, 4, re(0.0));
    yy[(0, 3)] = re(-1.0);
    yy[(1, 2)] = re(1.0);
    yy[(2, 1)] = re(1.0);
    yy[(3, 0)] = re(-1.0);
    let tau = a.transpose() * yy * &a;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    (sv[0] - sv[1] - sv[2] - sv[3]).max(0.0)
}

fn check_photons(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PHOTONS {
        return Err(Error::PhotonCount(n));
    }
    Ok(())
}

/// `cos α|V…V⟩ + sin α|H…H⟩` over `n` polarization qubits.
pub fn ghz_input(n: usize, alpha: f64) -> Result<PureState> {
    check_photons(n)?;
    let (s, c) = alpha.sin_cos();
    let bases: Vec<ModeBasis> = (0..n).map(ModeBasis::polarization).collect();
    let basis = if n == 1 {
        bases[0].clone()
    } else {
        ModeBasis::product_of(&bases)?
    };
    let mut amps = vec![re(0.0); basis.dim()];
    amps[0] = re(c);
    amps[basis.dim() - 1] += re(s);
    PureState::new(basis, amps)
}

/// `cos α|wave⟩^⊗n + sin α|particle⟩^⊗n`, every photon with the same phases and β.
pub fn ghz_output(
    n: usize,
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<PureState> {
    check_photons(n)?;
    let (sa, ca) = alpha.sin_cos();
    let waves: Vec<PureState> = (0..n)
        .map(|k| wave_component(phases.phi1, setting, k))
        .collect();
    let parts: Vec<PureState> = (0..n)
        .map(|k| particle_component(phases.phi2, setting, k))
        .collect();
    let w = tensor_all(&waves)?;
    let p = tensor_all(&parts)?;
    PureState::superpose(&[(re(ca), &w), (re(sa), &p)])
}

/// [`ghz_output`] computed by propagating [`ghz_input`] through `n` circuits.
pub fn ghz_output_propagated(
    n: usize,
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<PureState> {
    let mut state = ghz_input(n, alpha)?;
    for k in 0..n {
        let c = optics::toolbox_circuit(
            phases.phi1,
            phases.phi2,
            setting.beta,
            k,
            ToolboxStage::Full,
        )?;
        state = state.apply_local(k, &c.transfer_matrix()?, c.output_basis())?;
    }
    Ok(state)
}

/// Detector-sector statistics of an `n`-photon output.
///
/// Bit `k` of a sector index is set when photon `k` fires a particle-side
/// detector (2 or 4) and clear when it fires a wave-side one (1 or 3).
#[derive(Clone, Debug, PartialEq)]
pub struct SectorTable {
    pub n: usize,
    pub sectors: Vec<f64>,
    /// Per-photon detection probabilities `P_1..P_4`.
    pub marginals: Vec<[f64; 4]>,
}

impl SectorTable {
    pub fn all_wave(&self) -> f64 {
        self.sectors[0]
    }

    pub fn all_particle(&self) -> f64 {
        self.sectors[self.sectors.len() - 1]
    }

    /// Total probability of sectors mixing wave and particle detectors.
    pub fn crossed(&self) -> f64 {
        let last = self.sectors.len() - 1;
        self.sectors[1..last].iter().sum()
    }

    pub fn sector_label(&self, index: usize) -> String {
        (0..self.n)
            .map(|k| if index >> k & 1 == 1 { 'p' } else { 'w' })
            .collect()
    }
}

/// Sector table of any `n`-photon path state (factor `k` is photon `k`).
pub fn sector_table(state: &PureState, n: usize) -> Result<SectorTable> {
    check_photons(n)?;
    let expected = 4usize.pow(n as u32);
    if state.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: state.dim(),
        });
    }
    let mut sectors = vec![0.0; 1 << n];
    let mut marginals = vec![[0.0; 4]; n];
    for (idx, p) in state.populations().into_iter().enumerate() {
        let mut sector = 0;
        for (k, m) in marginals.iter_mut().enumerate() {
            let det = (idx / 4usize.pow((n - 1 - k) as u32)) % 4;
            m[det] += p;
            if PARTICLE_DETECTORS.contains(&det) {
                sector |= 1 << k;
            } else {
                debug_assert!(WAVE_DETECTORS.contains(&det));
            }
        }
        sectors[sector] += p;
    }
    Ok(SectorTable {
        n,
        sectors,
        marginals,
    })
}

/// Sector table of [`ghz_output`].
pub fn ghz_sector_probabilities(
    n: usize,
    alpha: f64,
    phases: ToolboxPhases,
    setting: MeasurementSetting,
) -> Result<SectorTable> {
    sector_table(&ghz_output(n, alpha, phases, setting)?, n)
}

/// `cos α|wave⟩|particle'⟩ + sin α|particle⟩|wave'⟩`, from `cos α|VH'⟩ + sin α|HV'⟩`.
pub fn vh_variant_output(s: &TwoPhotonSettings) -> PureState {
    let (sa, ca) = s.alpha.sin_cos();
    let [_, wp, pw, _] = sector_basis(s);
    PureState::superpose(&[(re(ca), &wp), (re(sa), &pw)]).expect("shared basis")
}

pub fn vh_variant_output_propagated(s: &TwoPhotonSettings) -> Result<PureState> {
    propagate_pair(&prepare_swapped_input(s.alpha), s)
}

/// `(|wave⟩|particle'⟩ + |particle⟩|wave'⟩)/√2`.
pub fn vh_bell_output(phases_a: ToolboxPhases, phases_b: ToolboxPhases) -> PureState {
    vh_variant_output(&TwoPhotonSettings::bell(phases_a, phases_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn ph(a: f64, b: f64) -> ToolboxPhases {
        ToolboxPhases::new(a, b).unwrap()
    }

    fn settings(
        alpha: f64,
        pa: ToolboxPhases,
        pb: ToolboxPhases,
        beta: MeasurementSetting,
    ) -> TwoPhotonSettings {
        TwoPhotonSettings::new(alpha, pa, pb, beta, beta).unwrap()
    }

    #[test]
    fn entangled_input_cases() {
        let s = prepare_entangled_input(FRAC_PI_4);
        assert!((s.amplitude("V⊗V'").unwrap() - re(FRAC_1_SQRT_2)).norm() < TOL);
        assert!((s.amplitude("H⊗H'").unwrap() - re(FRAC_1_SQRT_2)).norm() < TOL);
        let s0 = prepare_entangled_input(0.0);
        assert_eq!(s0.amplitude("V⊗V'").unwrap(), re(1.0));
        let ra = DensityMatrix::from_pure(&s).partial_trace(0).unwrap();
        assert!((ra.purity() - 0.5).abs() < TOL);
        assert!((ra.populations()[0] - 0.5).abs() < TOL);
    }

    #[test]
    fn output_closed_form_matches_propagation() {
        for beta in [MeasurementSetting::PRESENT, MeasurementSetting::ABSENT] {
            for (a, p1, q1, p2, q2) in [(0.3, 0.1, 2.0, 1.0, -1.0), (FRAC_PI_4, PI, 0.0, 0.0, 0.0)]
            {
                let s = settings(a, ph(p1, p2), ph(q1, q2), beta);
                let d = two_photon_output(&s)
                    .max_abs_diff(&two_photon_output_propagated(&s).unwrap())
                    .unwrap();
                assert!(d < TOL, "{d}");
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn separable_limit() {
        let pa = ph(0.7, 0.2);
        let pb = ph(1.9, 2.5);
        let s = settings(0.0, pa, pb, MeasurementSetting::PRESENT);
        let t = coincidence_probabilities(&s);
        let a = toolbox::detection_probabilities(0.0, pa, MeasurementSetting::PRESENT).p;
        let b = toolbox::detection_probabilities(0.0, pb, MeasurementSetting::PRESENT).p;
        for i in 0..4 {
            for j in 0..4 {
                assert!((t.p[i][j] - a[i] * b[j]).abs() < TOL);
            }
        }
        assert!(entanglement_witness(&t).abs() < TOL);
    }

    #[test]
    fn bell_all_zero_phases() {
        let t = coincidence_probabilities(&TwoPhotonSettings::bell(ph(0.0, 0.0), ph(0.0, 0.0)));
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j && i < 2 {
                    9.0 / 32.0
                } else {
                    1.0 / 32.0
                };
                assert!((t.p[i][j] - expect).abs() < TOL, "{i}{j}");
            }
        }
        let amp = two_photon_output(&TwoPhotonSettings::bell(ph(0.0, 0.0), ph(0.0, 0.0)))
            .amplitude("1⊗2'")
            .unwrap();
        assert!((amp.norm_sqr() - 1.0 / 32.0).abs() < TOL);
    }

    #[test]
    fn absent_splitter_tables() {
        let s = settings(
            FRAC_PI_4,
            ph(PI, 0.0),
            ph(0.0, 0.0),
            MeasurementSetting::ABSENT,
        );
        let t = coincidence_probabilities(&s);
        assert!((t.get(3, 1) - 0.5).abs() < TOL);
        for (i, j) in [(2, 2), (4, 4), (2, 4), (4, 2)] {
            assert!((t.get(i, j) - 0.125).abs() < TOL);
        }
        for (i, j) in [
            (1, 2),
            (2, 1),
            (3, 4),
            (4, 3),
            (1, 4),
            (4, 1),
            (2, 3),
            (3, 2),
        ] {
            assert!(t.get(i, j).abs() < TOL);
        }
        let born = CoincidenceTable::from_state(&two_photon_output(&s)).unwrap();
        assert!(t.max_abs_diff(&born) < TOL);
    }

    #[test]
    fn witness_cases() {
        for (phi1, expect) in [(0.0, 0.25), (PI, 0.0)] {
            let t =
                coincidence_probabilities(&TwoPhotonSettings::bell(ph(phi1, 0.0), ph(0.0, 0.0)));
            assert!((entanglement_witness(&t) - expect).abs() < TOL);
        }
        for phi1 in [0.0, 1.0, 2.0, PI] {
            for a in [0.0, FRAC_PI_2] {
                let s = settings(a, ph(phi1, 0.4), ph(0.3, 1.0), MeasurementSetting::PRESENT);
                assert!(entanglement_witness(&coincidence_probabilities(&s)).abs() < TOL);
            }
        }
    }

    #[test]
    fn witness_closed_form() {
        for (a, p1, q1) in [(0.3, 0.5, 1.5), (1.1, 4.0, 2.2), (FRAC_PI_4, 0.0, PI)] {
            let s = settings(a, ph(p1, 0.7), ph(q1, -0.3), MeasurementSetting::PRESENT);
            let w = entanglement_witness(&coincidence_probabilities(&s));
            assert!((w - entanglement_witness_closed(a, p1, q1)).abs() < TOL);
        }
    }

    #[test]
    fn concurrence_cases() {
        let base = TwoPhotonSettings::bell(ph(0.3, 1.2), ph(2.0, -0.5));
        assert!((concurrence(&base).unwrap() - 1.0).abs() < TOL);
        assert!(concurrence(&base.with_alpha(0.0)).unwrap() < TOL);
        let rho = two_photon_mixture(&base);
        assert!(density_concurrence(&rho, &base).unwrap() < TOL);
        let pure = DensityMatrix::from_pure(&two_photon_output(&base.with_alpha(0.4)));
        let c = density_concurrence(&pure, &base).unwrap();
        assert!((c - 0.8f64.sin()).abs() < TOL, "{c}");
    }

    #[test]
    fn non_expressible_state_rejected() {
        let s = TwoPhotonSettings::bell(ph(0.0, 0.0), ph(0.0, 0.0));
        let basis = ModeBasis::product(&ModeBasis::paths(0), &ModeBasis::paths(1)).unwrap();
        let stray = PureState::basis_state(&basis, "1⊗1'").unwrap();
        assert!(matches!(
            state_concurrence(&stray, &s),
            Err(Error::NotExpressible(_))
        ));
    }

    #[test]
    fn ghz_consistency() {
        let phases = ph(0.6, 1.4);
        let one = ghz_output(1, 0.5, phases, MeasurementSetting::PRESENT).unwrap();
        let single = toolbox::output_state(0.5, phases, MeasurementSetting::PRESENT);
        assert!(one.max_abs_diff(&single).unwrap() < TOL);
        let two = ghz_output(2, FRAC_PI_4, phases, MeasurementSetting::PRESENT).unwrap();
        let pair = two_photon_output(&TwoPhotonSettings::bell(phases, phases));
        assert!(two.max_abs_diff(&pair).unwrap() < TOL);
        let three = ghz_output(3, 0.4, phases, MeasurementSetting::ABSENT).unwrap();
        let prop = ghz_output_propagated(3, 0.4, phases, MeasurementSetting::ABSENT).unwrap();
        assert!(three.max_abs_diff(&prop).unwrap() < TOL);
    }

    #[test]
    fn ghz_three_sectors() {
        let t = ghz_sector_probabilities(3, FRAC_PI_4, ph(0.0, 0.0), MeasurementSetting::ABSENT)
            .unwrap();
        assert!((t.all_wave() - 0.5).abs() < TOL);
        assert!((t.all_particle() - 0.5).abs() < TOL);
        assert!(t.crossed() < TOL);
        assert_eq!(t.sector_label(0b101), "pwp");
    }

    #[test]
    fn photon_count_bounds() {
        assert_eq!(ghz_input(0, 0.1).unwrap_err(), Error::PhotonCount(0));
        assert_eq!(ghz_input(9, 0.1).unwrap_err(), Error::PhotonCount(9));
        assert_eq!(ghz_input(8, 0.1).unwrap().dim(), 256);
    }

    #[test]
    fn swapped_variant() {
        let s = TwoPhotonSettings::bell(ph(0.9, 0.1), ph(-0.4, 2.0));
        let v = vh_variant_output(&s);
        let [ww, _, _, pp] = sector_basis(&s);
        assert!(v.inner(&ww).unwrap().norm() < TOL && v.inner(&pp).unwrap().norm() < TOL);
        assert!((state_concurrence(&v, &s).unwrap() - 1.0).abs() < TOL);
        assert!(
            v.max_abs_diff(&vh_variant_output_propagated(&s).unwrap())
                .unwrap()
                < TOL
        );
        let s0 = s.with_settings(MeasurementSetting::ABSENT, MeasurementSetting::ABSENT);
        let t = CoincidenceTable::from_state(&vh_variant_output(&s0)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let crossed = WAVE_DETECTORS.contains(&i) != WAVE_DETECTORS.contains(&j);
                if !crossed {
                    assert!(t.p[i][j] < TOL);
                }
            }
        }
    }
}
