mod common;

use std::f64::consts::TAU;

use rand::Rng;

use qlnet::classical::cycle_structure;
use qlnet::netmodel::fixtures::loop_network;
use qlnet::netmodel::K1Kind;
use qlnet::statevec::{apply_step, build_propagator, spectrum, SpectrumOptions, StateVector};

#[test]
fn classical_spectra_are_unions_of_cycle_roots() {
    let mut rng = common::rng(301);
    let mut nets = vec![loop_network(4, K1Kind::Copy, false)];
    nets.extend((0..8).map(|_| {
        let n = rng.random_range(1..=3);
        common::random_kmax(&mut rng, n, 2, 0.0)
    }));
    for net in nets {
        let lengths = cycle_structure(&net).unwrap();
        let prop = build_propagator(&net).unwrap();
        assert!(prop.is_permutation(1e-12));
        let report = spectrum(&prop, SpectrumOptions::default()).unwrap();
        assert_eq!(report.cycle_lengths.as_ref(), Some(&lengths));

        // each cycle of length L contributes every L-th root of unity once
        let mut want: Vec<f64> = lengths
            .iter()
            .flat_map(|&l| (0..l).map(move |k| TAU * k as f64 / l as f64))
            .collect();
        want.sort_by(f64::total_cmp);
        let got = report.phases();
        assert_eq!(got.len(), want.len());
        assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-7));
    }
}

#[test]
fn propagators_are_unitary() {
    let mut rng = common::rng(302);
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let net = common::random_kmax(&mut rng, n, 3, 0.5);
        let prop = build_propagator(&net).unwrap();
        assert!(prop.unitarity_defect() < 1e-12);
    }
}

#[test]
fn propagator_columns_are_single_steps() {
    let mut rng = common::rng(303);
    for _ in 0..10 {
        let n = rng.random_range(1..=3);
        let net = common::random_kmax(&mut rng, n, 2, 0.5);
        let prop = build_propagator(&net).unwrap();
        for label in 0..prop.dim() {
            let psi = StateVector::basis(n, label);
            assert!(
                prop.apply(&psi)
                    .max_abs_diff(&apply_step(&net, &psi).unwrap())
                    < 1e-12
            );
        }
    }
}

#[test]
fn steps_preserve_norm() {
    let mut rng = common::rng(304);
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let net = common::random_kmax(&mut rng, n, 3, 0.5);
        let mut psi = StateVector::basis(n, rng.random_range(0..1 << (2 * n)));
        for _ in 0..20 {
            psi = apply_step(&net, &psi).unwrap();
        }
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }
}
