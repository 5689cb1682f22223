// SPDX-License-Identifier: Apache-2.0

//! The invariant suite behind `verify`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use lambda_holonomy::angle::{angle_diff, wrap_angle};
use lambda_holonomy::holonomy::{
    aa_phase_numeric, chi_of, commutator_norm, compose_two, connection_abb, extract_holonomy, geometric_audit,
    offres_gate, resonant_gate,
};
use lambda_holonomy::linalg::{gate_distance, project_to_qubit};
use lambda_holonomy::model::{axis_from_angles, LaserParams};
use lambda_holonomy::propagator::{
    gaussian_equal_area, propagate_numeric, propagate_square, square_envelope, TimeGrid,
};
use lambda_holonomy::synthesis::{
    average_gate_fidelity, decompose_two_resonant, random_axis, random_su2, recompose, synthesize_single, RotationSpec,
};
use lambda_holonomy::{QubitGate, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const RATIOS: [f64; 10] = [0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst observed value.
    pub value: f64,
    pub threshold: f64,
    /// Whether `value` must stay below (`true`) or above the threshold.
    pub upper: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.upper {
            self.value < self.threshold
        } else {
            self.value > self.threshold
        }
    }
}

fn below(name: &'static str, value: f64, threshold: f64) -> Check {
    Check { name, value, threshold, upper: true }
}

fn above(name: &'static str, value: f64, threshold: f64) -> Check {
    Check { name, value, threshold, upper: false }
}

type Runner = fn(u64, usize) -> Result<Vec<Check>>;

fn resonant(_: u64, steps: usize) -> Result<Vec<Check>> {
    let (mut dist, mut leak) = (0.0f64, 0.0f64);
    for theta in [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI] {
        for phi in [0.0, PI / 3.0, PI, 1.5 * PI] {
            let p = LaserParams::resonant(theta, phi)?;
            let env = square_envelope(&p);
            let u = propagate_numeric(&p, &env, &TimeGrid::over(&env, steps)?)?;
            let (g, l) = project_to_qubit(&u);
            dist = dist.max(gate_distance(&g, &resonant_gate(&p.axis()))?);
            leak = leak.max(l);
        }
    }
    Ok(vec![below("resonant_gate_distance", dist, 1e-9), below("resonant_leakage", leak, 1e-10)])
}

fn off_resonant(_: u64, _: usize) -> Result<Vec<Check>> {
    let mut err = 0.0f64;
    for r in RATIOS {
        let p = LaserParams::new(1.0, 0.4, r, 1.0)?;
        let est = extract_holonomy(&propagate_square(&p)?)?;
        err = err.max(angle_diff(est.chi, chi_of(p.delta, p.f0_amp)).abs());
    }
    Ok(vec![below("chi_error", err, 1e-9)])
}

fn aa_identity(_: u64, steps: usize) -> Result<Vec<Check>> {
    let mut err = 0.0f64;
    for r in RATIOS {
        let p = LaserParams::new(1.0, 0.4, r, 1.0)?;
        let expected = wrap_angle(PI - chi_of(p.delta, p.f0_amp));
        err = err.max(angle_diff(aa_phase_numeric(&p, steps)?, expected).abs());
    }
    Ok(vec![below("aa_phase_error", err, 1e-6)])
}

fn identity_limit(_: u64, _: usize) -> Result<Vec<Check>> {
    let p = LaserParams::new(FRAC_PI_2, 0.0, 100.0, 1.0)?;
    let est = extract_holonomy(&propagate_square(&p)?)?;
    let angle = PI - est.chi;
    let series = 2.0 * PI / (p.delta * p.delta);
    Ok(vec![
        below("identity_distance", gate_distance(&est.gate, &QubitGate::identity())?, 1e-6),
        below("identity_angle_rel_error", (angle - series).abs() / series, 0.05),
    ])
}

fn composition(seed: u64, _: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gate_err, mut angle_err) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (n, m) = (random_axis(&mut rng), random_axis(&mut rng));
        let c = compose_two(&n, &m);
        gate_err = gate_err.max(c.gate.max_diff(&(resonant_gate(&m) * resonant_gate(&n))));
        let est = su2_angle(&c.gate);
        angle_err = angle_err.max((est - 2.0 * n.dot(&m).clamp(-1.0, 1.0).acos()).abs());
    }
    Ok(vec![below("composition_gate_error", gate_err, 1e-12), below("composition_angle_error", angle_err, 1e-10)])
}

/// Rotation angle in `[0, 2π]` of an SU(2) element, from its trace.
fn su2_angle(g: &QubitGate) -> f64 {
    let (a0, _) = g.su2_coordinates();
    2.0 * a0.clamp(-1.0, 1.0).acos()
}

fn purity(_: u64, steps: usize) -> Result<Vec<Check>> {
    let mut square = 0.0f64;
    for r in RATIOS {
        let p = LaserParams::new(1.0, 0.4, r, 1.0)?;
        let env = square_envelope(&p);
        square = square.max(geometric_audit(&p, &env, &TimeGrid::over(&env, steps)?)?);
    }
    let p = LaserParams::new(FRAC_PI_2, 0.0, 1.0, 1.0)?;
    let env = gaussian_equal_area(&p);
    let gaussian = geometric_audit(&p, &env, &TimeGrid::over(&env, steps)?)?;
    Ok(vec![below("square_audit", square, 1e-9), above("gaussian_audit", gaussian, 1e-3)])
}

fn non_abelian(_: u64, _: usize) -> Result<Vec<Check>> {
    let p1 = LaserParams::resonant(FRAC_PI_2, 0.0)?;
    let p2 = LaserParams::resonant(FRAC_PI_2, FRAC_PI_2)?;
    let norm = (connection_abb(&p1) * connection_abb(&p2)).abs();
    Ok(vec![
        above("commutator_normalized", commutator_norm(&p1, &p2) / norm, 0.1),
        below("commutator_identical", commutator_norm(&p1, &p1), 1e-15),
    ])
}

fn synthesis(seed: u64, _: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axes: Vec<_> = (0..20).map(|_| random_axis(&mut rng)).collect();
    let mut worst = 0.0f64;
    for angle in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI, 4.0 * PI / 3.0, 11.0 * PI / 6.0] {
        for axis in &axes {
            let target = RotationSpec::new(*axis, angle)?;
            let r = synthesize_single(&target, 1.0)?;
            let est = extract_holonomy(&propagate_square(&r.params)?)?;
            worst = worst.max(1.0 - average_gate_fidelity(&est.gate, &target.gate()));
        }
    }
    Ok(vec![below("synthesis_infidelity", worst, 1e-9)])
}

fn decomposition(seed: u64, _: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let target = random_su2(&mut rng);
        let (n, m) = decompose_two_resonant(&target)?;
        worst = worst.max(gate_distance(&recompose(&n, &m), &target)?);
    }
    Ok(vec![below("decomposition_distance", worst, 1e-10)])
}

fn gate_law(_: u64, _: usize) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for r in RATIOS {
        let p = LaserParams::new(2.0, 5.0, r, 1.0)?;
        let (g, _) = project_to_qubit(&propagate_square(&p)?);
        let expected = offres_gate(&axis_from_angles(p.theta, p.phi), chi_of(p.delta, p.f0_amp)).matrix;
        worst = worst.max(g.max_diff(&expected));
    }
    Ok(vec![below("gate_law_error", worst, 1e-9)])
}

const RUNNERS: [Runner; 10] = [
    resonant,
    off_resonant,
    gate_law,
    aa_identity,
    identity_limit,
    composition,
    purity,
    non_abelian,
    synthesis,
    decomposition,
];

/// Runs every check; results are in a fixed order.
pub fn run_all(seed: u64, steps: usize) -> Result<Vec<Check>> {
    let groups: Result<Vec<Vec<Check>>> = RUNNERS.par_iter().map(|run| run(seed, steps)).collect();
    Ok(groups?.into_iter().flatten().collect())
}
