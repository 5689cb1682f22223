// SPDX-License-Identifier: Apache-2.0

//! Holonomic gates on the qubit subspace.
//!
//! A pulse pair with angles `(θ, φ)` leaves the dark state `|d⟩` untouched
//! and drives the bright state `|b⟩` around a closed loop through `|e⟩`.
//! After one cyclic period the bright state has picked up the purely
//! geometric factor `−e^{−iχ}`, so the subspace holonomy is
//!
//! ```text
//! U(n, χ) = |d⟩⟨d| − e^{−iχ}|b⟩⟨b|,    χ = πδ / √(δ² + 4F₀²)
//! ```
//!
//! i.e. a rotation by `π − χ` about `n` up to a global phase. This module
//! provides the closed forms together with numerical witnesses: the
//! bright-state connection and its loop integral, the dynamical-phase audit
//! and the commutator of connections of two pulse pairs.

use std::f64::consts::PI;

use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::linalg::{leakage, project_to_qubit, Ket3, Operator3, QubitGate, C64};
use crate::model::{bright_eigen, cross, dark_bright, dot, hamiltonian, BlochAxis, LaserParams, PulseEnvelope};
use crate::propagator::{cyclic_period, evolve_numeric, square_envelope, TimeGrid};

/// Leakage at or above which a propagator is not treated as cyclic.
pub const CYCLIC_LEAKAGE_TOL: f64 = 1e-6;

/// A closed-form holonomic gate `|d⟩⟨d| − e^{−iχ}|b⟩⟨b|`.
#[derive(Debug, Clone, Copy)]
pub struct HolonomicGate {
    pub axis: BlochAxis,
    pub chi: f64,
    pub matrix: QubitGate,
}

impl HolonomicGate {
    /// Rotation angle `π − χ` about `axis`.
    pub fn rotation_angle(&self) -> f64 {
        PI - self.chi
    }
}

/// One sample of the bright-bright connection component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionSample {
    pub t: f64,
    pub a_bb: f64,
}

/// The resonant holonomy `n·σ`, a π rotation about `n`.
pub fn resonant_gate(axis: &BlochAxis) -> QubitGate {
    QubitGate::pauli_dot(axis.vector())
}

/// `χ = πδ / √(δ² + 4F₀²)`.
pub fn chi_of(delta: f64, f0_amp: f64) -> f64 {
    PI * delta / delta.hypot(2.0 * f0_amp)
}

pub fn offres_gate(axis: &BlochAxis, chi: f64) -> HolonomicGate {
    let (theta, phi) = axis.angles();
    let (d, b) = dark_bright(theta, phi);
    let bright_factor = -C64::from_polar(1.0, -chi);
    let full = d.outer(&d) + b.outer(&b).scale(bright_factor);
    let (matrix, _) = project_to_qubit(&full);
    HolonomicGate { axis: *axis, chi, matrix }
}

/// Product of two resonant holonomies, `U(C_m)·U(C_n)`.
#[derive(Debug, Clone, Copy)]
pub struct Composition {
    /// `m·n − iσ·(n×m)`.
    pub gate: QubitGate,
    /// `2·arccos(n·m)`.
    pub angle: f64,
    cross: [f64; 3],
}

impl Composition {
    /// Unit rotation axis `(n×m)/‖n×m‖`.
    pub fn axis(&self) -> Result<[f64; 3]> {
        let norm = dot(self.cross, self.cross).sqrt();
        if norm < 1e-12 {
            return Err(Error::ParallelAxes);
        }
        Ok(self.cross.map(|x| x / norm))
    }
}

pub fn compose_two(n: &BlochAxis, m: &BlochAxis) -> Composition {
    let cos_half = n.dot(m).clamp(-1.0, 1.0);
    let nxm = cross(n.vector(), m.vector());
    let gate =
        QubitGate::identity().scale(C64::new(cos_half, 0.0)) + QubitGate::pauli_dot(nxm).scale(C64::new(0.0, -1.0));
    Composition { gate, angle: 2.0 * cos_half.acos(), cross: nxm }
}

/// Closed-form `U(t,0)|b⟩` during a square pulse:
/// `e^{−iδt/2}(e^{−iΩt/2} cos ν |+⟩ + e^{iΩt/2} sin ν |−⟩)`.
pub fn bright_trajectory(p: &LaserParams, t: f64) -> Ket3 {
    let be = bright_eigen(p);
    let (sn, cn) = be.nu.sin_cos();
    be.plus.scale(C64::from_polar(cn, -be.energy_plus * t)) + be.minus.scale(C64::from_polar(sn, -be.energy_minus * t))
}

/// The constant `A_bb = −√(δ² + 4F₀²)·sin²ν`.
pub fn connection_abb(p: &LaserParams) -> f64 {
    -p.omega() * sin2_nu(p)
}

fn sin2_nu(p: &LaserParams) -> f64 {
    0.5 * (1.0 + p.delta / p.omega())
}

/// Aharonov–Anandan phase `γ = −2π sin²ν` of the bright state, in `(−π, π]`.
pub fn aa_phase(p: &LaserParams) -> f64 {
    wrap_angle(-2.0 * PI * sin2_nu(p))
}

fn bright_samples(p: &LaserParams, steps: usize) -> Result<(TimeGrid, Vec<Ket3>)> {
    let env = square_envelope(p);
    let grid = TimeGrid::over(&env, steps)?;
    let (_, b) = dark_bright(p.theta, p.phi);
    let states = evolve_numeric(p, &env, &grid)?.iter().map(|u| u.apply(&b)).collect();
    Ok((grid, states))
}

/// Finite-difference samples of `A_bb(t) = i⟨b̃|d/dt|b̃⟩` along the
/// numerically propagated bright state, in the single-valued gauge
/// `|b̃(t)⟩ = e^{iE₊t}|b(t)⟩`. Each sample sits at a substep midpoint.
pub fn connection_samples(p: &LaserParams, steps: usize) -> Result<Vec<ConnectionSample>> {
    let (grid, states) = bright_samples(p, steps)?;
    let energy = bright_eigen(p).energy_plus;
    let dt = grid.dt();
    Ok(states
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let t = grid.time(k);
            let overlap = w[0].inner(&w[1]) * C64::from_polar(1.0, energy * dt);
            ConnectionSample { t: t + 0.5 * dt, a_bb: -overlap.arg() / dt }
        })
        .collect())
}

/// Loop integral of the bright-state connection over one cyclic period,
/// from the numerically propagated trajectory.
///
/// The increments `−arg⟨b_k|b_{k+1}⟩` are the finite-difference connection
/// times `dt`; the closing term `arg⟨b_0|b_N⟩` lifts the open path to a
/// single-valued loop, which makes the sum gauge invariant.
pub fn aa_phase_numeric(p: &LaserParams, steps: usize) -> Result<f64> {
    let (_, states) = bright_samples(p, steps)?;
    let increments: f64 = states.windows(2).map(|w| -w[0].inner(&w[1]).arg()).sum();
    let closure = states[0].inner(&states[states.len() - 1]).arg();
    Ok(wrap_angle(increments + closure))
}

/// Largest `|⟨k|U†(t,0) H(t) U(t,0)|l⟩|` over grid times and `k, l ∈ {0, 1}`,
/// with `U` from the numerical propagator. Zero means the evolution of the
/// qubit subspace carries no dynamical phase.
pub fn geometric_audit(p: &LaserParams, env: &PulseEnvelope, grid: &TimeGrid) -> Result<f64> {
    let trajectory = evolve_numeric(p, env, grid)?;
    let mut worst = 0.0f64;
    for (k, u) in trajectory.iter().enumerate() {
        let h = hamiltonian(p, env, grid.time(k));
        let rotated = u.adjoint() * h * *u;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max(rotated[(r, c)].norm());
            }
        }
    }
    Ok(worst)
}

/// Max-norm of `[A, Ã]` for two pulse pairs, each connection evaluated at
/// the start of its own pulse where `|b(0)⟩ = |b⟩`.
pub fn commutator_norm(p1: &LaserParams, p2: &LaserParams) -> f64 {
    commutator_norm_at(p1, 0.0, p2, 0.0)
}

/// `‖A_bb Ã_b̃b̃ (|b⟩⟨b|b̃⟩⟨b̃| − |b̃⟩⟨b̃|b⟩⟨b|)‖_max` with `|b(t)⟩` taken at
/// time `t1` of the first pulse and `t2` of the second.
pub fn commutator_norm_at(p1: &LaserParams, t1: f64, p2: &LaserParams, t2: f64) -> f64 {
    let b1 = bright_trajectory(p1, t1);
    let b2 = bright_trajectory(p2, t2);
    let overlap = b1.inner(&b2);
    let forward = b1.outer(&b2).scale(overlap);
    let backward = b2.outer(&b1).scale(overlap.conj());
    let scale = connection_abb(p1) * connection_abb(p2);
    ((forward - backward) * scale).max_abs()
}

/// Holonomy read back from a simulated propagator.
#[derive(Debug, Clone, Copy)]
pub struct HolonomyEstimate {
    /// The projected 2×2 block.
    pub gate: QubitGate,
    /// Relative phase `χ` between the dark and bright eigenvalues.
    pub chi: f64,
    pub leakage: f64,
    /// Axis recovered from the dark eigenvector.
    pub axis: BlochAxis,
}

/// Inverts `U(n, χ)`: diagonalizes the projected block, takes the
/// eigenvalue nearest 1 as the dark one and reports
/// `χ = arg(−λ_d / λ_b)` in `(−π, π]`.
pub fn extract_holonomy(u: &Operator3) -> Result<HolonomyEstimate> {
    let leak = leakage(u);
    if !(leak < CYCLIC_LEAKAGE_TOL) {
        return Err(Error::NotCyclic { leakage: leak });
    }
    let (gate, _) = project_to_qubit(u);
    let [e1, e2] = gate.eigen_normal();
    let one = C64::new(1.0, 0.0);
    let (dark, bright) = if (e1.0 - one).norm() <= (e2.0 - one).norm() { (e1, e2) } else { (e2, e1) };
    let chi = wrap_angle((-dark.0 / bright.0).arg());
    let [v0, v1] = dark.1;
    let cross_term = v0.conj() * v1;
    let axis = BlochAxis::new([2.0 * cross_term.re, 2.0 * cross_term.im, v0.norm_sqr() - v1.norm_sqr()])?;
    Ok(HolonomyEstimate { gate, chi, leakage: leak, axis })
}

/// Cyclic period of the square pulse for `p`.
pub fn period(p: &LaserParams) -> f64 {
    cyclic_period(p.delta, p.f0_amp)
}
