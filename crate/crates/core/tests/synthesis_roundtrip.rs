// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use lambda_holonomy::holonomy::{compose_two, extract_holonomy};
use lambda_holonomy::linalg::gate_distance;
use lambda_holonomy::model::BlochAxis;
use lambda_holonomy::propagator::propagate_square;
use lambda_holonomy::synthesis::{
    average_gate_fidelity, decompose_two_resonant, random_axis, random_su2, recompose, synthesize_single, RotationSpec,
};
use lambda_holonomy::QubitGate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ANGLES: [f64; 7] = [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI, 4.0 * PI / 3.0, 11.0 * PI / 6.0];

#[test]
fn synthesized_pulses_reproduce_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let axes: Vec<BlochAxis> = (0..20).map(|_| random_axis(&mut rng)).collect();
    for &angle in &ANGLES {
        for axis in &axes {
            let target = RotationSpec::new(*axis, angle).unwrap();
            let r = synthesize_single(&target, 1.0).unwrap();
            let est = extract_holonomy(&propagate_square(&r.params).unwrap()).unwrap();
            let goal = target.gate();
            assert!(gate_distance(&est.gate, &goal).unwrap() < 1e-9, "{angle} {axis:?}");
            assert!(average_gate_fidelity(&est.gate, &goal) > 1.0 - 1e-9);
            assert!(gate_distance(&r.predicted_gate, &goal).unwrap() < 1e-10);
        }
    }
}

#[test]
fn half_turns_need_no_detuning() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let r = synthesize_single(&RotationSpec::new(random_axis(&mut rng), PI).unwrap(), 0.8).unwrap();
        assert_eq!(r.params.delta, 0.0);
    }
}

#[test]
fn haar_targets_decompose_into_two_resonant_pulses() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let target = random_su2(&mut rng);
        let (n, m) = decompose_two_resonant(&target).unwrap();
        assert!(gate_distance(&recompose(&n, &m), &target).unwrap() < 1e-10);
        let c = compose_two(&n, &m);
        assert!(gate_distance(&c.gate, &target).unwrap() < 1e-10);
    }
}

#[test]
fn decomposition_is_deterministic() {
    let target = QubitGate::rotation([0.0, 0.6, 0.8], 1.3);
    assert_eq!(decompose_two_resonant(&target).unwrap(), decompose_two_resonant(&target).unwrap());
}
