// SPDX-License-Identifier: Apache-2.0

//! Compiling target rotations into pulse parameters.
//!
//! A single off-resonant pulse pair realizes any rotation: the axis fixes
//! `(θ, φ)` and the angle `α = π − χ` fixes the detuning through the
//! inverse of `χ(δ)`. Alternatively two resonant pulse pairs compose into
//! an arbitrary SU(2) element.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::holonomy::{offres_gate, resonant_gate};
use crate::linalg::{QubitGate, UNITARY_TOL};
use crate::model::{cross, dot, BlochAxis, LaserParams};
use crate::propagator::cyclic_period;

/// Target rotation by `angle ∈ (0, 2π)` about `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    pub axis: BlochAxis,
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(axis: BlochAxis, angle: f64) -> Result<Self> {
        if !(angle > 0.0 && angle < TAU) {
            return Err(Error::AngleOutOfRange(angle));
        }
        Ok(RotationSpec { axis, angle })
    }

    /// `exp(−i·angle/2·n·σ)`.
    pub fn gate(&self) -> QubitGate {
        QubitGate::rotation(self.axis.vector(), self.angle)
    }
}

/// Configurable limits for the rotating-wave-approximation heuristic.
/// These are engineering defaults, not derived bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaThresholds {
    /// Largest `|δ|/F₀` accepted without a warning when no carrier is given.
    pub max_detuning_ratio: f64,
    /// Fewest carrier cycles per pulse accepted without a warning.
    pub min_carrier_cycles: f64,
}

impl Default for RwaThresholds {
    fn default() -> Self {
        RwaThresholds { max_detuning_ratio: 20.0, min_carrier_cycles: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RwaWarning {
    pub message: String,
}

/// Flags pulses short enough to threaten the rotating-wave approximation.
/// Purely advisory.
pub fn rwa_warning(p: &LaserParams, carrier: Option<f64>, limits: &RwaThresholds) -> Option<RwaWarning> {
    let tau = cyclic_period(p.delta, p.f0_amp);
    match carrier {
        Some(w) => {
            let cycles = tau * w / TAU;
            (cycles < limits.min_carrier_cycles).then(|| RwaWarning {
                message: format!(
                    "pulse lasts {cycles:.3} carrier cycles (< {}); the rotating-wave approximation may fail",
                    limits.min_carrier_cycles
                ),
            })
        }
        None => {
            let ratio = p.delta.abs() / p.f0_amp;
            (ratio > limits.max_detuning_ratio).then(|| RwaWarning {
                message: format!(
                    "|delta|/F0 = {ratio:.3} exceeds {}; pulse duration {tau:.3e} is short and the rotating-wave approximation may fail",
                    limits.max_detuning_ratio
                ),
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub params: LaserParams,
    pub tau: f64,
    /// `|d⟩⟨d| − e^{−iχ}|b⟩⟨b|`, equal to the target up to a global phase.
    pub predicted_gate: QubitGate,
    pub warnings: Vec<String>,
}

/// Inverse of `χ(δ)`: `δ = 2F₀χ / √(π² − χ²)` for `χ ∈ (−π, π)`.
pub fn detuning_for_chi(chi: f64, f0_amp: f64) -> f64 {
    2.0 * f0_amp * chi / ((PI - chi) * (PI + chi)).sqrt()
}

pub fn synthesize_single(target: &RotationSpec, f0_amp: f64) -> Result<SynthesisResult> {
    synthesize_single_with(target, f0_amp, &RwaThresholds::default())
}

pub fn synthesize_single_with(target: &RotationSpec, f0_amp: f64, limits: &RwaThresholds) -> Result<SynthesisResult> {
    let target = RotationSpec::new(target.axis, target.angle)?;
    let chi = PI - target.angle;
    let delta = if chi == 0.0 { 0.0 } else { detuning_for_chi(chi, f0_amp) };
    let (theta, phi) = target.axis.angles();
    let params = LaserParams::new(theta, phi, delta, f0_amp)?;
    let warnings = rwa_warning(&params, None, limits).map(|w| vec![w.message]).unwrap_or_default();
    Ok(SynthesisResult {
        params,
        tau: cyclic_period(delta, f0_amp),
        predicted_gate: offres_gate(&params.axis(), chi).matrix,
        warnings,
    })
}

/// Splits a target into two resonant π rotations, returning `(n, m)` with
/// `(m·σ)(n·σ)` equal to the target up to a global phase.
///
/// `n` is placed in the plane of the rotation axis and `z` (or `x` when the
/// rotation axis is `±z`).
pub fn decompose_two_resonant(target: &QubitGate) -> Result<(BlochAxis, BlochAxis)> {
    let defect = target.unitarity_defect();
    if defect > UNITARY_TOL || !defect.is_finite() {
        return Err(Error::NonUnitaryInput { defect });
    }
    let (mut a0, mut a) = target.to_special_unitary().su2_coordinates();
    // fix the sign of the SU(2) lift: a0 ≥ 0, and for half turns the first
    // significant axis component positive
    let leading = a.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(0.0);
    if a0 < -1e-15 || (a0.abs() <= 1e-15 && leading < 0.0) {
        a0 = -a0;
        a = a.map(|x| -x);
    }
    let sin_half = dot(a, a).sqrt();
    if sin_half < 1e-14 {
        return Ok((BlochAxis::z(), BlochAxis::z()));
    }
    let k = a.map(|x| x / sin_half);
    let reference = if k[0].hypot(k[1]) < 1e-9 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let along = dot(reference, k);
    let n = BlochAxis::new([reference[0] - along * k[0], reference[1] - along * k[1], reference[2] - along * k[2]])?;
    let nv = n.vector();
    let a_cross_n = cross(a, nv);
    let m = BlochAxis::new([a0 * nv[0] + a_cross_n[0], a0 * nv[1] + a_cross_n[1], a0 * nv[2] + a_cross_n[2]])?;
    Ok((n, m))
}

/// `(m·σ)(n·σ)`.
pub fn recompose(n: &BlochAxis, m: &BlochAxis) -> QubitGate {
    resonant_gate(m) * resonant_gate(n)
}

/// `(|Tr(U†V)|²/2 + 1)/3`, the average gate fidelity on a qubit.
pub fn average_gate_fidelity(u: &QubitGate, v: &QubitGate) -> f64 {
    let tr = (u.adjoint() * *v).trace().norm_sqr();
    (0.5 * tr + 1.0) / 3.0
}

/// Uniformly distributed unit axis.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> BlochAxis {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochAxis::new([r * phi.cos(), r * phi.sin(), z]).expect("unit vector")
}

/// Haar-random SU(2) element: uniform axis, angle density `∝ sin²(α/2)` on
/// `[0, 2π]`, drawn by rejection.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> QubitGate {
    let axis = random_axis(rng);
    let angle = loop {
        let alpha: f64 = rng.gen_range(0.0..TAU);
        if rng.gen::<f64>() <= (0.5 * alpha).sin().powi(2) {
            break alpha;
        }
    };
    QubitGate::rotation(axis.vector(), angle)
}
