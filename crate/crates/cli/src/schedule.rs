// SPDX-License-Identifier: Apache-2.0

//! Pulse schedules in TOML.
//!
//! ```toml
//! version = 1
//!
//! [options]
//! steps = 10000
//! tol = 1e-9
//!
//! [[pulses]]
//! theta = 1.5707963267948966
//! phi = 0.0
//! delta = 0.0
//! f0_amp = 1.0
//! envelope = { kind = "square" }
//! ```
//!
//! `f0_amp` scales every envelope shape: a square pulse has amplitude
//! `f0_amp` (and lasts one cyclic period unless `duration` is given), a
//! Gaussian peaks at `f0_amp` unless `area` is given, and tabulated samples
//! are multiplied by `f0_amp`.

use std::f64::consts::PI;

use lambda_holonomy::model::{make_envelope, EnvelopeSpec, LaserParams, PulseEnvelope};
use lambda_holonomy::propagator::{cyclic_period, DEFAULT_STEPS, DEFAULT_TOLERANCE};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEDULE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub version: u32,
    #[serde(default)]
    pub options: Options,
    pub pulses: Vec<PulseRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

impl Default for Options {
    fn default() -> Self {
        Options { steps: DEFAULT_STEPS, tol: DEFAULT_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseRecord {
    pub theta: f64,
    pub phi: f64,
    #[serde(default)]
    pub delta: f64,
    pub f0_amp: f64,
    #[serde(default)]
    pub envelope: EnvelopeRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EnvelopeRecord {
    Square {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration: Option<f64>,
    },
    Gaussian {
        duration: f64,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        area: Option<f64>,
    },
    Tabulated {
        duration: f64,
        samples: Vec<f64>,
    },
}

impl Default for EnvelopeRecord {
    fn default() -> Self {
        EnvelopeRecord::Square { duration: None }
    }
}

/// A validated pulse ready to propagate.
#[derive(Debug, Clone)]
pub struct Pulse {
    pub params: LaserParams,
    pub envelope: PulseEnvelope,
}

impl PulseRecord {
    pub fn resonant_square(theta: f64, phi: f64, f0_amp: f64) -> Self {
        PulseRecord { theta, phi, delta: 0.0, f0_amp, envelope: EnvelopeRecord::default() }
    }

    fn build(&self, path: &str) -> CliResult<Pulse> {
        let field = |name: &str| format!("{path}.{name}");
        if !(self.theta.is_finite() && (0.0..=PI).contains(&self.theta)) {
            return Err(CliError::validation(field("theta"), format!("must lie in [0, π], got {}", self.theta)));
        }
        if !self.phi.is_finite() {
            return Err(CliError::validation(field("phi"), "must be finite"));
        }
        if !self.delta.is_finite() {
            return Err(CliError::validation(field("delta"), "must be finite"));
        }
        if !(self.f0_amp.is_finite() && self.f0_amp > 0.0) {
            return Err(CliError::validation(field("f0_amp"), format!("must be positive, got {}", self.f0_amp)));
        }
        let params = LaserParams::new(self.theta, self.phi, self.delta, self.f0_amp)
            .map_err(|e| CliError::validation(path, e.to_string()))?;
        let envelope = self.envelope(&params).map_err(|e| CliError::validation(field("envelope"), e.to_string()))?;
        Ok(Pulse { params, envelope })
    }

    fn envelope(&self, p: &LaserParams) -> lambda_holonomy::Result<PulseEnvelope> {
        let f0 = self.f0_amp;
        match &self.envelope {
            EnvelopeRecord::Square { duration } => {
                PulseEnvelope::square(f0, duration.unwrap_or_else(|| cyclic_period(p.delta, f0)))
            }
            EnvelopeRecord::Gaussian { duration, width, center, area } => {
                let center = center.unwrap_or(0.5 * duration);
                let shape =
                    make_envelope(EnvelopeSpec::Gaussian { peak: f0, center, width: *width, duration: *duration })?;
                match area {
                    None => Ok(shape),
                    Some(a) if a.is_finite() => {
                        let peak = f0 * a / shape.area();
                        if !peak.is_finite() {
                            return Err(lambda_holonomy::Error::BadEnvelopeSpec(
                                "gaussian has no area inside [0, duration] to scale".into(),
                            ));
                        }
                        make_envelope(EnvelopeSpec::Gaussian { peak, center, width: *width, duration: *duration })
                    }
                    Some(a) => Err(lambda_holonomy::Error::BadEnvelopeSpec(format!("area must be finite, got {a}"))),
                }
            }
            EnvelopeRecord::Tabulated { duration, samples } => make_envelope(EnvelopeSpec::Tabulated {
                samples: samples.iter().map(|s| s * f0).collect(),
                duration: *duration,
            }),
        }
    }
}

impl ScheduleFile {
    pub fn new(pulses: Vec<PulseRecord>) -> Self {
        ScheduleFile { version: SCHEDULE_VERSION, options: Options::default(), pulses }
    }

    /// Checks every invariant and returns the pulses in time order.
    pub fn pulses(&self) -> CliResult<Vec<Pulse>> {
        if self.version != SCHEDULE_VERSION {
            return Err(CliError::validation("version", format!("expected {SCHEDULE_VERSION}, got {}", self.version)));
        }
        if self.options.steps == 0 {
            return Err(CliError::validation("options.steps", "must be at least 1"));
        }
        if !(self.options.tol.is_finite() && self.options.tol > 0.0) {
            return Err(CliError::validation("options.tol", format!("must be positive, got {}", self.options.tol)));
        }
        if self.pulses.is_empty() {
            return Err(CliError::validation("pulses", "at least one pulse is required"));
        }
        self.pulses.iter().enumerate().map(|(i, r)| r.build(&format!("pulses[{i}]"))).collect()
    }
}

pub fn parse_schedule(text: &str) -> CliResult<ScheduleFile> {
    let file: ScheduleFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string().trim_end().to_string()))?;
    file.pulses()?;
    Ok(file)
}

pub fn serialize_schedule(file: &ScheduleFile) -> CliResult<String> {
    toml::to_string(file).map_err(|e| CliError::Parse(e.to_string()))
}
