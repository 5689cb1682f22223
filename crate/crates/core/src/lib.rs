// SPDX-License-Identifier: Apache-2.0

//! Nonadiabatic holonomic single-qubit gates in a driven three-level Λ
//! system with resonant or detuned lasers.
//!
//! Two lower levels `|0⟩, |1⟩` (the qubit) couple to an excited level `|e⟩`
//! through a pulse pair with envelope `F(t)`, angles `(θ, φ)` and common
//! detuning `δ`. For square pulses of the cyclic duration
//! `τ = 2π/√(δ² + 4F₀²)` the qubit subspace returns to itself and acquires
//! the purely geometric gate `|d⟩⟨d| − e^{−iχ}|b⟩⟨b|`.
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: 3×3 / 2×2 complex algebra, Hermitian exponentials, gate metrics.
//! - [`model`]: control parameters, envelopes, Hamiltonian, dark/bright frames.
//! - [`propagator`]: closed-form and time-ordered numerical evolution.
//! - [`holonomy`]: holonomic gates, connection, geometric phase, audits.
//! - [`synthesis`]: target rotations to pulse parameters.

pub mod angle;
pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod model;
pub mod propagator;
pub mod synthesis;

pub use error::{Error, Result};
pub use linalg::{Ket3, Operator3, QubitGate, C64};
pub use model::{BlochAxis, LaserParams, PulseEnvelope};
