// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the holonomic gate library.

pub mod commands;
pub mod error;
pub mod output;
pub mod schedule;
pub mod sweep;
pub mod verify;

pub use commands::{execute, run, Cli};
pub use error::{CliError, CliResult};
pub use schedule::{parse_schedule, serialize_schedule, ScheduleFile};
pub use sweep::{run_sweep, SweepConfig, SweepRow};
