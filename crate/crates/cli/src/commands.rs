// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and command dispatch.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambda_holonomy::holonomy::{aa_phase, chi_of, geometric_audit, offres_gate, resonant_gate, CYCLIC_LEAKAGE_TOL};
use lambda_holonomy::linalg::{gate_distance, project_to_qubit};
use lambda_holonomy::model::{BlochAxis, LaserParams, PulseEnvelope};
use lambda_holonomy::propagator::{
    cyclic_period, gaussian_equal_area, propagate_numeric_adaptive, propagate_square_for, square_envelope, TimeGrid,
    DEFAULT_STEPS, DEFAULT_TOLERANCE,
};
use lambda_holonomy::synthesis::{
    average_gate_fidelity, decompose_two_resonant, rwa_warning, synthesize_single, RotationSpec, RwaThresholds,
};
use lambda_holonomy::{Operator3, QubitGate};

use crate::error::{CliError, CliResult};
use crate::output::{gate_cells, Cell, Report, GATE_COLUMNS};
use crate::schedule::{parse_schedule, EnvelopeRecord, Pulse, ScheduleFile};
use crate::sweep::{linspace, run_sweep, to_report, SweepConfig};
use crate::verify::run_all;

/// Doublings allowed on top of `--steps` for smooth envelopes.
const MAX_DOUBLINGS: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "holonomic", version, about = "Holonomic single-qubit gates in a driven Λ system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Integration substeps per pulse [default: 10000]
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Numerical tolerance [default: 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Read angle inputs in degrees
    #[arg(long, global = true)]
    pub degrees: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PulseArgs {
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub f0: f64,
}

#[derive(Debug, Args)]
pub struct RotationArgs {
    /// Rotation axis as x,y,z
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub axis: [f64; 3],
    #[arg(long)]
    pub angle: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form gate for one pulse pair
    #[command(allow_negative_numbers = true)]
    Gate(PulseArgs),
    /// Propagate a schedule and print the composed gate
    Simulate {
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Pulse parameters for a target rotation
    #[command(allow_negative_numbers = true)]
    Synthesize {
        #[command(flatten)]
        rotation: RotationArgs,
        #[arg(long, default_value_t = 1.0)]
        f0: f64,
        /// Optical carrier angular frequency
        #[arg(long)]
        carrier: Option<f64>,
    },
    /// Two resonant pulse axes for a target rotation
    #[command(allow_negative_numbers = true)]
    Decompose {
        #[command(flatten)]
        rotation: RotationArgs,
    },
    /// Largest dynamical-phase matrix element along the evolution
    #[command(allow_negative_numbers = true)]
    Audit {
        #[arg(long, conflicts_with = "theta")]
        schedule: Option<PathBuf>,
        #[command(flatten)]
        pulse: PulseArgs,
    },
    /// χ and γ against δ/F₀
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, default_value_t = FRAC_PI_2)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value_t = 1.0)]
        f0: f64,
        /// Comma-separated δ/F₀ values
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "delta_range")]
        deltas: Option<Vec<f64>>,
        /// δ/F₀ range as start:stop:count [default: -5:5:21]
        #[arg(long, allow_hyphen_values = true)]
        delta_range: Option<String>,
        /// Optical carrier angular frequency
        #[arg(long)]
        carrier: Option<f64>,
    },
    /// Run the invariant suite
    Verify,
}

fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part.trim().parse().map_err(|_| format!("not a number: {part:?}"))?;
    }
    Ok(v)
}

fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::validation("--delta-range", format!("expected start:stop:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(start.is_finite() && stop.is_finite()) || count == 0 {
        return Err(bad());
    }
    Ok(linspace(start, stop, count))
}

struct Settings {
    steps: usize,
    tol: f64,
    degrees: bool,
    seed: u64,
}

impl Settings {
    fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn steps_or(&self, file: &ScheduleFile, explicit: Option<usize>) -> usize {
        explicit.unwrap_or(file.options.steps)
    }
}

fn load_schedule(path: &PathBuf) -> CliResult<(ScheduleFile, Vec<Pulse>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file = parse_schedule(&text)?;
    let pulses = file.pulses()?;
    Ok((file, pulses))
}

fn pulse_params(s: &Settings, a: &PulseArgs) -> CliResult<LaserParams> {
    let theta = a.theta.ok_or_else(|| CliError::Usage("--theta is required".into()))?;
    Ok(LaserParams::new(s.angle(theta), s.angle(a.phi), a.delta, a.f0)?)
}

fn rotation(s: &Settings, r: &RotationArgs) -> CliResult<RotationSpec> {
    let axis = BlochAxis::new(r.axis).map_err(|e| CliError::validation("--axis", e.to_string()))?;
    Ok(RotationSpec::new(axis, s.angle(r.angle))?)
}

fn check_settings(s: &Settings) -> CliResult<()> {
    if s.steps == 0 {
        return Err(CliError::validation("--steps", "must be at least 1"));
    }
    if !(s.tol.is_finite() && s.tol > 0.0) {
        return Err(CliError::validation("--tol", format!("must be positive, got {}", s.tol)));
    }
    Ok(())
}

/// Propagator of one pulse: closed form for square envelopes, adaptive
/// time-ordered integration otherwise.
fn propagate_pulse(pulse: &Pulse, steps: usize, tol: f64) -> CliResult<Operator3> {
    let env = &pulse.envelope;
    if env.is_square() {
        return Ok(propagate_square_for(&pulse.params, env.duration())?);
    }
    let grid = TimeGrid::over(env, steps)?;
    Ok(propagate_numeric_adaptive(&pulse.params, env, &grid, tol, MAX_DOUBLINGS)?.0)
}

/// `(angle, axis)` of the SU(2) lift with non-negative trace.
fn axis_angle(g: &QubitGate) -> (f64, [f64; 3]) {
    let (a0, a) = g.to_special_unitary().su2_coordinates();
    let (a0, a) = if a0 < 0.0 { (-a0, a.map(|x| -x)) } else { (a0, a) };
    let s = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let axis = if s < 1e-14 { [0.0, 0.0, 1.0] } else { a.map(|x| x / s) };
    (2.0 * s.atan2(a0), axis)
}

fn with_gate(mut cells: Vec<Cell>, g: &QubitGate) -> Vec<Cell> {
    cells.extend(gate_cells(g));
    cells
}

fn columns(head: &[&'static str]) -> Vec<&'static str> {
    head.iter().chain(GATE_COLUMNS.iter()).copied().collect()
}

fn gate(s: &Settings, a: &PulseArgs) -> CliResult<Report> {
    let p = pulse_params(s, a)?;
    let chi = chi_of(p.delta, p.f0_amp);
    let g = offres_gate(&p.axis(), chi);
    let mut report = Report::new(
        "gate",
        &columns(&[
            "theta",
            "phi",
            "delta",
            "f0_amp",
            "tau",
            "chi",
            "rotation_angle",
            "aa_phase",
            "axis_x",
            "axis_y",
            "axis_z",
        ]),
    );
    let n = g.axis.vector();
    report.push(with_gate(
        vec![
            p.theta.into(),
            p.phi.into(),
            p.delta.into(),
            p.f0_amp.into(),
            cyclic_period(p.delta, p.f0_amp).into(),
            chi.into(),
            g.rotation_angle().into(),
            aa_phase(&p).into(),
            n[0].into(),
            n[1].into(),
            n[2].into(),
        ],
        &g.matrix,
    ));
    if let Some(w) = rwa_warning(&p, None, &RwaThresholds::default()) {
        report.warnings.push(w.message);
    }
    Ok(report)
}

fn simulate(s: &Settings, path: &PathBuf, steps: Option<usize>, tol: Option<f64>) -> CliResult<Report> {
    let (file, pulses) = load_schedule(path)?;
    let steps = s.steps_or(&file, steps);
    let tol = tol.unwrap_or(file.options.tol);
    check_settings(&Settings { steps, tol, ..*s })?;
    let mut u = Operator3::identity();
    for pulse in &pulses {
        u = propagate_pulse(pulse, steps, tol)? * u;
    }
    let (g, leak) = project_to_qubit(&u);
    let mut report =
        Report::new("simulate", &columns(&["pulses", "leakage", "rotation_angle", "axis_x", "axis_y", "axis_z"]));
    if leak >= CYCLIC_LEAKAGE_TOL {
        report.warnings.push(format!("leakage {leak:.3e} out of the qubit subspace; the schedule is not cyclic"));
    }
    let (angle, axis) = axis_angle(&g);
    report.push(with_gate(
        vec![pulses.len().into(), leak.into(), angle.into(), axis[0].into(), axis[1].into(), axis[2].into()],
        &g,
    ));
    Ok(report)
}

fn synthesize(s: &Settings, r: &RotationArgs, f0: f64, carrier: Option<f64>) -> CliResult<Report> {
    let target = rotation(s, r)?;
    if !(f0.is_finite() && f0 > 0.0) {
        return Err(CliError::validation("--f0", format!("must be positive, got {f0}")));
    }
    let result = synthesize_single(&target, f0)?;
    let p = result.params;
    let chi = chi_of(p.delta, p.f0_amp);
    let mut report = Report::new(
        "synthesize",
        &columns(&["theta", "phi", "delta", "f0_amp", "tau", "chi", "rotation_angle", "fidelity"]),
    );
    report.push(with_gate(
        vec![
            p.theta.into(),
            p.phi.into(),
            p.delta.into(),
            p.f0_amp.into(),
            result.tau.into(),
            chi.into(),
            target.angle.into(),
            average_gate_fidelity(&result.predicted_gate, &target.gate()).into(),
        ],
        &result.predicted_gate,
    ));
    report.warnings = match carrier {
        Some(c) => rwa_warning(&p, Some(c), &RwaThresholds::default()).map(|w| w.message).into_iter().collect(),
        None => result.warnings,
    };
    Ok(report)
}

fn decompose(s: &Settings, r: &RotationArgs) -> CliResult<Report> {
    let target = rotation(s, r)?;
    let (n, m) = decompose_two_resonant(&target.gate())?;
    let mut report = Report::new("decompose", &["pulse", "theta", "phi", "axis_x", "axis_y", "axis_z"]);
    for (k, axis) in [n, m].iter().enumerate() {
        let (theta, phi) = axis.angles();
        let v = axis.vector();
        report.push(vec![(k + 1).into(), theta.into(), phi.into(), v[0].into(), v[1].into(), v[2].into()]);
    }
    let residual = gate_distance(&(resonant_gate(&m) * resonant_gate(&n)), &target.gate())?;
    if residual > 1e-10 {
        return Err(CliError::Failed(format!("recomposition misses the target by {residual:.3e}")));
    }
    Ok(report)
}

fn audit(s: &Settings, schedule: Option<&PathBuf>, a: &PulseArgs, steps: Option<usize>) -> CliResult<Report> {
    let mut report = Report::new("audit", &["pulse", "envelope", "duration", "audit_max"]);
    let mut rows: Vec<(&str, LaserParams, PulseEnvelope)> = Vec::new();
    let steps = match schedule {
        Some(path) => {
            let (file, pulses) = load_schedule(path)?;
            for (record, pulse) in file.pulses.iter().zip(pulses) {
                let kind = match record.envelope {
                    EnvelopeRecord::Square { .. } => "square",
                    EnvelopeRecord::Gaussian { .. } => "gaussian",
                    EnvelopeRecord::Tabulated { .. } => "tabulated",
                };
                rows.push((kind, pulse.params, pulse.envelope));
            }
            s.steps_or(&file, steps)
        }
        None => {
            let p = pulse_params(s, a)?;
            rows.push(("square", p, square_envelope(&p)));
            rows.push(("gaussian", p, gaussian_equal_area(&p)));
            steps.unwrap_or(DEFAULT_STEPS)
        }
    };
    check_settings(&Settings { steps, ..*s })?;
    for (k, (kind, p, env)) in rows.iter().enumerate() {
        let value = geometric_audit(p, env, &TimeGrid::over(env, steps)?)?;
        report.push(vec![(k + 1).into(), (*kind).into(), env.duration().into(), value.into()]);
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    s: &Settings,
    theta: f64,
    phi: f64,
    f0: f64,
    deltas: Option<&Vec<f64>>,
    range: Option<&String>,
    carrier: Option<f64>,
) -> CliResult<Report> {
    check_settings(s)?;
    let ratios = match (deltas, range) {
        (Some(d), _) => d.clone(),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => linspace(-5.0, 5.0, 21),
    };
    if let Some(i) = ratios.iter().position(|r| !r.is_finite()) {
        return Err(CliError::validation(format!("--deltas[{i}]"), "must be finite"));
    }
    if !(f0.is_finite() && f0 > 0.0) {
        return Err(CliError::validation("--f0", format!("must be positive, got {f0}")));
    }
    let cfg = SweepConfig { theta: s.angle(theta), phi: s.angle(phi), f0_amp: f0, steps: s.steps, tol: s.tol, carrier };
    LaserParams::new(cfg.theta, cfg.phi, 0.0, f0)?;
    let rows = run_sweep(&cfg, &ratios)?;
    let mut report = to_report(&rows);
    for r in rows.iter().filter(|r| r.rwa_flag) {
        report.warnings.push(format!("delta/F0 = {}: the rotating-wave approximation may fail", r.delta_over_f0));
    }
    Ok(report)
}

fn verify(s: &Settings) -> CliResult<Report> {
    check_settings(s)?;
    let checks = run_all(s.seed, s.steps)?;
    let mut report = Report::new("verify", &["check", "passed", "value", "threshold", "bound"]);
    for c in &checks {
        report.push(vec![
            c.name.into(),
            c.passed().into(),
            c.value.into(),
            c.threshold.into(),
            if c.upper { "upper" } else { "lower" }.into(),
        ]);
    }
    Ok(report)
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let c = &cli.common;
    let s = Settings {
        steps: c.steps.unwrap_or(DEFAULT_STEPS),
        tol: c.tol.unwrap_or(DEFAULT_TOLERANCE),
        degrees: c.degrees,
        seed: c.seed,
    };
    match &cli.command {
        Command::Gate(a) => gate(&s, a),
        Command::Simulate { schedule } => simulate(&s, schedule, c.steps, c.tol),
        Command::Synthesize { rotation, f0, carrier } => synthesize(&s, rotation, *f0, *carrier),
        Command::Decompose { rotation } => decompose(&s, rotation),
        Command::Audit { schedule, pulse } => audit(&s, schedule.as_ref(), pulse, c.steps),
        Command::Sweep { theta, phi, f0, deltas, delta_range, carrier } => {
            sweep(&s, *theta, *phi, *f0, deltas.as_ref(), delta_range.as_ref(), *carrier)
        }
        Command::Verify => verify(&s),
    }
}

/// Full command-line behaviour; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let text = match cli.common.format {
        Format::Csv => report.to_csv(),
        Format::Structured => report.to_structured(),
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: i/o error: {e}");
        return 1;
    }
    if report.command == "verify" && report.rows.iter().any(|r| r[1] == Cell::Bool(false)) {
        let _ = writeln!(stderr, "error: invariant checks failed");
        return 2;
    }
    0
}
