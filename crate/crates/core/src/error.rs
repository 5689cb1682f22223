// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("operator is not unitary (defect {defect:.3e})")]
    NonUnitaryInput { defect: f64 },

    #[error("invalid laser parameters: {0}")]
    InvalidParams(String),

    #[error("invalid pulse envelope: {0}")]
    BadEnvelopeSpec(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time grid too coarse: doubling the step count changed the propagator by {change:.3e} (tolerance {tolerance:.3e})")]
    GridTooCoarse { change: f64, tolerance: f64 },

    #[error("evolution is not cyclic on the qubit subspace (leakage {leakage:.3e})")]
    NotCyclic { leakage: f64 },

    #[error("rotation axes are parallel; the composed rotation axis is undefined")]
    ParallelAxes,

    #[error("rotation angle {0} outside the open interval (0, 2pi)")]
    AngleOutOfRange(f64),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::GridTooCoarse { .. }
                | Error::NotCyclic { .. }
                | Error::NonHermitianInput { .. }
                | Error::NonUnitaryInput { .. }
                | Error::ParallelAxes
        )
    }
}
