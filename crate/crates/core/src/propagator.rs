// SPDX-License-Identifier: Apache-2.0

//! Time evolution of the Λ system.
//!
//! Square pulses have a constant generator and are exponentiated in closed
//! form. Arbitrary envelopes are time-ordered with the exponential midpoint
//! rule: each substep is `exp(−i·H(t_mid)·dt)`, exactly unitary and second
//! order in `dt`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, leakage, Operator3};
use crate::model::{hamiltonian, LaserParams, PulseEnvelope};

pub const DEFAULT_STEPS: usize = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Uniform grid of `steps` substeps on `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(Error::InvalidGrid(format!("need finite t_end > t_start, got [{t_start}, {t_end}]")));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be at least 1".into()));
        }
        Ok(TimeGrid { t_start, t_end, steps })
    }

    /// `[0, duration]` of the envelope.
    pub fn over(env: &PulseEnvelope, steps: usize) -> Result<Self> {
        Self::new(0.0, env.duration(), steps)
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn refined(&self) -> Self {
        TimeGrid { steps: 2 * self.steps, ..*self }
    }

    fn covers(&self, env: &PulseEnvelope) -> bool {
        let slack = 1e-12 * env.duration();
        self.t_start <= slack && self.t_end >= env.duration() - slack
    }
}

/// Square-pulse cyclic period `2π / √(δ² + 4F₀²)`.
pub fn cyclic_period(delta: f64, f0_amp: f64) -> f64 {
    TAU / delta.hypot(2.0 * f0_amp)
}

/// The square envelope of amplitude `F₀` lasting one cyclic period.
pub fn square_envelope(p: &LaserParams) -> PulseEnvelope {
    PulseEnvelope::square(p.f0_amp, cyclic_period(p.delta, p.f0_amp))
        .expect("validated parameters give a positive period")
}

/// Gaussian of width `τ/6` centred in `[0, τ]` with the same area `F₀τ` as
/// the cyclic square pulse.
pub fn gaussian_equal_area(p: &LaserParams) -> PulseEnvelope {
    let tau = cyclic_period(p.delta, p.f0_amp);
    PulseEnvelope::gaussian_with_area(p.f0_amp * tau, tau / 6.0, tau)
        .expect("validated parameters give a positive period")
}

/// `U(τ,0) = exp(−iτ(F₀H₀ + δ|e⟩⟨e|))` at the cyclic period.
pub fn propagate_square(p: &LaserParams) -> Result<Operator3> {
    propagate_square_for(p, cyclic_period(p.delta, p.f0_amp))
}

/// Square-pulse propagator for an arbitrary pulse duration `t`.
pub fn propagate_square_for(p: &LaserParams, t: f64) -> Result<Operator3> {
    expm_hermitian(&p.square_generator(), t)
}

/// Square-pulse propagator `U(t₁, t₀)` over a window that may extend beyond
/// the pulse on either side; free evolution under `δ|e⟩⟨e|` outside.
pub fn propagate_square_window(p: &LaserParams, t0: f64, t1: f64) -> Result<Operator3> {
    let tau = cyclic_period(p.delta, p.f0_amp);
    let before = (0.0f64.min(t1) - t0).max(0.0);
    let during = (tau.min(t1) - t0.max(0.0)).max(0.0);
    let after = (t1 - tau.max(t0)).max(0.0);
    let free = Operator3::excited_projector() * p.delta;
    Ok(expm_hermitian(&free, after)? * propagate_square_for(p, during)? * expm_hermitian(&free, before)?)
}

fn step(p: &LaserParams, env: &PulseEnvelope, grid: &TimeGrid, k: usize) -> Result<Operator3> {
    let dt = grid.dt();
    let t_mid = grid.t_start + (k as f64 + 0.5) * dt;
    expm_hermitian(&hamiltonian(p, env, t_mid), dt)
}

/// Cumulative propagators `U(t_k, t_start)` for `k = 0..=steps`.
///
/// No coverage requirement: the grid may stop inside the pulse.
pub fn evolve_numeric(p: &LaserParams, env: &PulseEnvelope, grid: &TimeGrid) -> Result<Vec<Operator3>> {
    let mut out = Vec::with_capacity(grid.steps + 1);
    let mut u = Operator3::identity();
    out.push(u);
    for k in 0..grid.steps {
        let s = step(p, env, grid, k)?;
        u = if k == 0 { s } else { s * u };
        out.push(u);
    }
    Ok(out)
}

/// Time-ordered propagator over a grid covering the envelope support.
pub fn propagate_numeric(p: &LaserParams, env: &PulseEnvelope, grid: &TimeGrid) -> Result<Operator3> {
    if !grid.covers(env) {
        return Err(Error::InvalidGrid(format!(
            "grid [{}, {}] does not cover the pulse support [0, {}]",
            grid.t_start,
            grid.t_end,
            env.duration()
        )));
    }
    let mut u = step(p, env, grid, 0)?;
    for k in 1..grid.steps {
        u = step(p, env, grid, k)? * u;
    }
    Ok(u)
}

/// `propagate_numeric` with a step-doubling convergence check. Returns the
/// refined propagator when the two agree within `tolerance`.
pub fn propagate_numeric_checked(
    p: &LaserParams,
    env: &PulseEnvelope,
    grid: &TimeGrid,
    tolerance: f64,
) -> Result<Operator3> {
    let coarse = propagate_numeric(p, env, grid)?;
    let fine = propagate_numeric(p, env, &grid.refined())?;
    let change = coarse.max_diff(&fine);
    if !(change <= tolerance) {
        return Err(Error::GridTooCoarse { change, tolerance });
    }
    Ok(fine)
}

/// Doubles the step count of `grid` until successive propagators agree
/// within `tolerance`, at most `max_doublings` times. Returns the finest
/// propagator and its step count.
pub fn propagate_numeric_adaptive(
    p: &LaserParams,
    env: &PulseEnvelope,
    grid: &TimeGrid,
    tolerance: f64,
    max_doublings: u32,
) -> Result<(Operator3, usize)> {
    let mut grid = *grid;
    let mut current = propagate_numeric(p, env, &grid)?;
    let mut change = f64::INFINITY;
    for _ in 0..=max_doublings {
        grid = grid.refined();
        let fine = propagate_numeric(p, env, &grid)?;
        change = current.max_diff(&fine);
        current = fine;
        if change <= tolerance {
            return Ok((current, grid.steps));
        }
    }
    Err(Error::GridTooCoarse { change, tolerance })
}

/// Leakage out of the computational subspace; zero certifies that the
/// subspace returned to itself.
pub fn subspace_return_error(u: &Operator3) -> f64 {
    leakage(u)
}
