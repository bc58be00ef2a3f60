//! Randomized invariants of states, circuits, tables and sampling.

#![allow(clippy::needless_range_loop)]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use wptoolbox::entangle::{
    coincidence_probabilities, two_photon_output, two_photon_output_propagated, CoincidenceTable,
    TwoPhotonSettings,
};
use wptoolbox::hardware::{equivalence_check, GridPoint};
use wptoolbox::optics::{
    balanced_bs, measurement_splitter, phase_shifter, Circuit, ElementUnitary,
};
use wptoolbox::qcore::{apply_unitary, mix, tensor, ModeBasis, PureState};
use wptoolbox::shots::sample_counts;
use wptoolbox::toolbox::{self, MeasurementSetting, ToolboxPhases};

const TOL: f64 = 1e-12;
const PATHS: [&str; 4] = ["1", "2", "3", "4"];

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("non-zero vector", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn path_state(primes: usize) -> impl Strategy<Value = PureState> {
    amplitudes(4).prop_map(move |a| {
        PureState::new(ModeBasis::paths(primes), a)
            .unwrap()
            .normalize()
            .unwrap()
    })
}

/// Random unitary from the QR factorization of a random complex matrix.
fn unitary(n: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    amplitudes(n * n).prop_map(move |a| {
        let m = DMatrix::from_vec(n, n, a);
        let qr = m.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = DMatrix::from_diagonal(&r.diagonal().map(|d| {
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        }));
        q * phases
    })
}

#[derive(Clone, Debug)]
enum Piece {
    Bs(usize, usize),
    Phase(usize, f64),
    Split(usize, usize, f64),
}

fn piece() -> impl Strategy<Value = Piece> {
    let pair = (0usize..4, 0usize..4).prop_filter("distinct modes", |(a, b)| a != b);
    prop_oneof![
        pair.clone().prop_map(|(a, b)| Piece::Bs(a, b)),
        (0usize..4, 0.0..TAU).prop_map(|(m, p)| Piece::Phase(m, p)),
        (pair, 0.0..FRAC_PI_2).prop_map(|((a, b), t)| Piece::Split(a, b, t)),
    ]
}

fn element(p: &Piece) -> ElementUnitary {
    match *p {
        Piece::Bs(a, b) => balanced_bs(PATHS[a], PATHS[b]).unwrap(),
        Piece::Phase(m, phi) => phase_shifter(PATHS[m], phi).unwrap(),
        Piece::Split(a, b, t) => measurement_splitter(PATHS[a], PATHS[b], t).unwrap(),
    }
}

fn phases() -> impl Strategy<Value = ToolboxPhases> {
    (0.0..TAU, 0.0..TAU).prop_map(|(a, b)| ToolboxPhases::new(a, b).unwrap())
}

fn beta() -> impl Strategy<Value = MeasurementSetting> {
    prop_oneof![
        Just(MeasurementSetting::PRESENT),
        Just(MeasurementSetting::ABSENT),
        (0.0..FRAC_PI_2).prop_map(|b| MeasurementSetting::new(b).unwrap()),
    ]
}

fn two_photon() -> impl Strategy<Value = TwoPhotonSettings> {
    (0.0..FRAC_PI_2, phases(), phases(), beta(), beta())
        .prop_map(|(a, pa, pb, ba, bb)| TwoPhotonSettings::new(a, pa, pb, ba, bb).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tensor_norm_is_product(a in path_state(0), b in path_state(1)) {
        let t = tensor(&a, &b);
        prop_assert!((t.norm() - 1.0).abs() < TOL);
        prop_assert_eq!(t.dim(), 16);
    }

    #[test]
    fn tensor_is_associative(a in path_state(0), b in path_state(1), c in path_state(2)) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        for (x, y) in left.amplitudes().iter().zip(right.amplitudes()) {
            prop_assert!((x - y).norm() < TOL);
        }
    }

    #[test]
    fn unitary_then_adjoint_restores(s in path_state(0), u in unitary(4)) {
        let e = ElementUnitary::new("U", &PATHS, u).unwrap();
        let out = apply_unitary(&e, &s).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < TOL);
        let back = apply_unitary(&e.adjoint(), &out).unwrap();
        prop_assert!(back.max_abs_diff(&s).unwrap() < TOL);
    }

    #[test]
    fn elementwise_equals_matrix_product(s in path_state(0), pieces in prop::collection::vec(piece(), 0..12)) {
        let mut c = Circuit::new(ModeBasis::paths(0));
        for p in &pieces {
            c = c.compose(element(p)).unwrap();
        }
        let a = c.propagate(&s).unwrap();
        let b = c.propagate_by_matrix(&s).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() < TOL);
        prop_assert!((a.norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn mixture_purity_at_most_one(a in path_state(0), b in path_state(0), w in 0.0f64..1.0) {
        let rho = mix(&[(a, w), (b, 1.0 - w)]).unwrap();
        prop_assert!(rho.purity() <= 1.0 + TOL);
        prop_assert!((rho.trace() - 1.0).abs() < TOL);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn partial_trace_of_product(a in path_state(0), b in path_state(1)) {
        let rho = wptoolbox::qcore::DensityMatrix::from_pure(&tensor(&a, &b));
        let ra = rho.partial_trace(0).unwrap();
        let expect = wptoolbox::qcore::DensityMatrix::from_pure(&a);
        prop_assert!(ra.max_abs_diff(&expect).unwrap() < TOL);
    }

    #[test]
    fn single_photon_closed_form_matches_circuit(alpha in 0.0..FRAC_PI_2, p in phases(), s in beta()) {
        let closed = toolbox::detection_probabilities(alpha, p, s);
        let prop = toolbox::output_state_propagated(alpha, p, s).unwrap().populations();
        prop_assert!((closed.total() - 1.0).abs() < TOL);
        for n in 0..4 {
            prop_assert!((closed.p[n] - prop[n]).abs() < TOL);
            prop_assert!(closed.p[n] > -TOL && closed.p[n] < 1.0 + TOL);
        }
        if let Some(t) = closed.terms {
            prop_assert!((closed.p[0] - t.pc - t.ic).abs() < TOL);
            prop_assert!((closed.p[3] - t.ps + t.is_).abs() < TOL);
        }
    }

    #[test]
    fn coincidence_table_consistent(s in two_photon()) {
        let closed = coincidence_probabilities(&s);
        let prop = CoincidenceTable::from_state(&two_photon_output_propagated(&s).unwrap()).unwrap();
        prop_assert!((closed.total() - 1.0).abs() < TOL);
        prop_assert!(closed.max_abs_diff(&prop) < TOL);
        prop_assert!(closed.max_abs_diff(&CoincidenceTable::from_state(&two_photon_output(&s)).unwrap()) < TOL);
    }

    #[test]
    fn marginals_of_product_state_match_single_photon(pa in phases(), pb in phases()) {
        // α = 0 is the product |wave⟩|wave'⟩: each marginal is the single-photon wave distribution.
        let s = TwoPhotonSettings::bell(pa, pb).with_alpha(0.0);
        let t = coincidence_probabilities(&s);
        let ma = toolbox::detection_probabilities(0.0, pa, MeasurementSetting::PRESENT).p;
        let mb = toolbox::detection_probabilities(0.0, pb, MeasurementSetting::PRESENT).p;
        for n in 0..4 {
            prop_assert!((t.marginal_a()[n] - ma[n]).abs() < TOL);
            prop_assert!((t.marginal_b()[n] - mb[n]).abs() < TOL);
        }
    }

    #[test]
    fn hardware_matches_conceptual(alpha in 0.0..FRAC_PI_2, p in phases(), present in any::<bool>()) {
        let setting = if present { MeasurementSetting::PRESENT } else { MeasurementSetting::ABSENT };
        let e = equivalence_check(&[GridPoint { alpha, phases: p }], setting, true).unwrap();
        prop_assert!(e.max_deviation < 1e-10);
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>(), n in 1u64..50_000) {
        let s = TwoPhotonSettings::bell(
            ToolboxPhases::new(1.0, 0.0).unwrap(),
            ToolboxPhases::new(0.0, 0.0).unwrap(),
        );
        let dist = coincidence_probabilities(&s).flat();
        let a = sample_counts(&dist, n, seed).unwrap();
        let b = sample_counts(&dist, n, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.counts.iter().sum::<u64>(), n);
        for (k, p) in a.counts.iter().zip(dist) {
            if p == 0.0 {
                prop_assert_eq!(*k, 0);
            }
        }
    }
}

#[test]
fn intermediate_beta_is_unitary_and_normalized() {
    for k in 0..=16 {
        let b = MeasurementSetting::new(k as f64 * FRAC_PI_8 / 4.0).unwrap();
        let p = toolbox::detection_probabilities(0.6, ToolboxPhases::new(0.3, 1.2).unwrap(), b);
        assert!((p.total() - 1.0).abs() < TOL);
    }
}
