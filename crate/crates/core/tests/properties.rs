// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use lambda_holonomy::holonomy::{chi_of, offres_gate};
use lambda_holonomy::linalg::{expm_hermitian, gate_distance, unitarity_defect};
use lambda_holonomy::model::{axis_from_angles, bright_eigen, dark_bright, LaserParams};
use lambda_holonomy::synthesis::average_gate_fidelity;
use lambda_holonomy::{Operator3, QubitGate, C64};
use proptest::prelude::*;

fn hermitian() -> impl Strategy<Value = Operator3> {
    prop::array::uniform9(-3.0f64..3.0).prop_map(|v| {
        let mut h = Operator3::zeros();
        h[(0, 0)] = C64::new(v[0], 0.0);
        h[(1, 1)] = C64::new(v[1], 0.0);
        h[(2, 2)] = C64::new(v[2], 0.0);
        for (k, &(r, c)) in [(0, 1), (0, 2), (1, 2)].iter().enumerate() {
            h[(r, c)] = C64::new(v[3 + 2 * k], v[4 + 2 * k]);
            h[(c, r)] = h[(r, c)].conj();
        }
        h
    })
}

fn params() -> impl Strategy<Value = LaserParams> {
    (0.0..=PI, 0.0..TAU, -6.0f64..6.0, 0.1f64..3.0).prop_map(|(t, p, d, f)| LaserParams::new(t, p, d, f).unwrap())
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..=1.0, 0.0..TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    })
}

fn qubit_gate() -> impl Strategy<Value = QubitGate> {
    (unit_vector(), 0.0..TAU, 0.0..TAU).prop_map(|(n, a, g)| QubitGate::rotation(n, a).scale(C64::from_polar(1.0, g)))
}

proptest! {
    #[test]
    fn expm_is_unitary(h in hermitian(), t in -4.0f64..4.0) {
        prop_assert!(unitarity_defect(&expm_hermitian(&h, t).unwrap()) < 1e-12);
    }

    #[test]
    fn expm_group_law(h in hermitian(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let lhs = expm_hermitian(&h, s).unwrap() * expm_hermitian(&h, t).unwrap();
        prop_assert!(lhs.max_diff(&expm_hermitian(&h, s + t).unwrap()) < 1e-11);
    }

    #[test]
    fn expm_of_negated_time_is_adjoint(h in hermitian(), t in -3.0f64..3.0) {
        let u = expm_hermitian(&h, t).unwrap();
        prop_assert!(u.adjoint().max_diff(&expm_hermitian(&h, -t).unwrap()) < 1e-12);
    }

    #[test]
    fn gate_distance_symmetric_and_bounded(u in qubit_gate(), v in qubit_gate()) {
        let d = gate_distance(&u, &v).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - gate_distance(&v, &u).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn gate_distance_phase_invariant(u in qubit_gate(), g in 0.0..TAU) {
        prop_assert!(gate_distance(&u, &u.scale(C64::from_polar(1.0, g))).unwrap() < 1e-14);
    }

    #[test]
    fn sqrt_gate_distance_triangle(u in qubit_gate(), v in qubit_gate(), w in qubit_gate()) {
        let d = |a: &QubitGate, b: &QubitGate| gate_distance(a, b).unwrap().sqrt();
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + 1e-7);
    }

    #[test]
    fn dark_bright_orthonormal(theta in 0.0..=PI, phi in 0.0..TAU) {
        let (d, b) = dark_bright(theta, phi);
        prop_assert!((d.norm_sqr() - 1.0).abs() < 1e-14);
        prop_assert!((b.norm_sqr() - 1.0).abs() < 1e-14);
        prop_assert!(d.inner(&b).norm() < 1e-15);
        prop_assert!(d[2].norm() == 0.0 && b[2].norm() == 0.0);
    }

    #[test]
    fn dark_state_is_annihilated(p in params()) {
        let (d, _) = dark_bright(p.theta, p.phi);
        prop_assert!(p.drive_operator().apply(&d).norm() < 1e-15);
    }

    #[test]
    fn axis_is_unit_and_round_trips(theta in 0.01..PI - 0.01, phi in 0.0..TAU) {
        let n = axis_from_angles(theta, phi);
        let v = n.vector();
        prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        let (t, p) = n.angles();
        prop_assert!((t - theta).abs() < 1e-9);
        prop_assert!((C64::from_polar(1.0, p) - C64::from_polar(1.0, phi)).norm() < 1e-9);
    }

    #[test]
    fn bright_eigenvectors_residual(p in params()) {
        let e = bright_eigen(&p);
        let h = p.square_generator();
        for (v, energy) in [(e.plus, e.energy_plus), (e.minus, e.energy_minus)] {
            let r = h.apply(&v) - v.scale(C64::new(energy, 0.0));
            prop_assert!(r.norm() < 1e-12 * (1.0 + energy.abs()));
        }
        let sin2 = e.nu.sin().powi(2);
        prop_assert!((sin2 - 0.5 * (1.0 + p.delta / p.omega())).abs() < 1e-12);
    }

    #[test]
    fn chi_is_odd_and_increasing(d in 0.0f64..50.0, f in 0.1f64..5.0, step in 1e-3f64..1.0) {
        prop_assert_eq!(chi_of(-d, f), -chi_of(d, f));
        prop_assert!(chi_of(d + step, f) > chi_of(d, f));
        prop_assert!(chi_of(d, f).abs() < PI);
    }

    #[test]
    fn holonomic_gate_is_unitary(theta in 0.0..=PI, phi in 0.0..TAU, chi in -PI..PI) {
        let g = offres_gate(&axis_from_angles(theta, phi), chi);
        prop_assert!(g.matrix.unitarity_defect() < 1e-14);
    }

    #[test]
    fn fidelity_symmetric_and_phase_invariant(u in qubit_gate(), v in qubit_gate(), a in 0.0..TAU, b in 0.0..TAU) {
        let f = average_gate_fidelity(&u, &v);
        prop_assert!((f - average_gate_fidelity(&v, &u)).abs() < 1e-14);
        let shifted = average_gate_fidelity(&u.scale(C64::from_polar(1.0, a)), &v.scale(C64::from_polar(1.0, b)));
        prop_assert!((f - shifted).abs() < 1e-13);
        prop_assert!((1.0 / 3.0 - 1e-14..=1.0 + 1e-14).contains(&f));
    }
}
