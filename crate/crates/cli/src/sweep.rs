// SPDX-License-Identifier: Apache-2.0

//! `χ` and `γ` against `δ/F₀` for square pulse pairs.

use std::f64::consts::PI;

use lambda_holonomy::angle::angle_diff;
use lambda_holonomy::holonomy::{aa_phase_numeric, chi_of, extract_holonomy, geometric_audit};
use lambda_holonomy::model::LaserParams;
use lambda_holonomy::propagator::{cyclic_period, propagate_numeric, square_envelope, TimeGrid};
use lambda_holonomy::synthesis::{rwa_warning, RwaThresholds};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::Report;

pub const CSV_HEADER: &str =
    "delta_over_f0,tau,chi_analytic,chi_numeric,aa_phase,rotation_angle,leakage,audit_max,rwa_flag";

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub theta: f64,
    pub phi: f64,
    pub f0_amp: f64,
    pub steps: usize,
    pub tol: f64,
    pub carrier: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta_over_f0: f64,
    pub tau: f64,
    pub chi_analytic: f64,
    pub chi_numeric: f64,
    pub aa_phase: f64,
    pub rotation_angle: f64,
    pub leakage: f64,
    pub audit_max: f64,
    pub rwa_flag: bool,
}

fn row(cfg: &SweepConfig, ratio: f64) -> CliResult<SweepRow> {
    let p = LaserParams::new(cfg.theta, cfg.phi, ratio * cfg.f0_amp, cfg.f0_amp)?;
    let env = square_envelope(&p);
    let grid = TimeGrid::over(&env, cfg.steps)?;
    let u = propagate_numeric(&p, &env, &grid)?;
    let est = extract_holonomy(&u)?;
    let chi_analytic = chi_of(p.delta, p.f0_amp);
    if !(angle_diff(est.chi, chi_analytic).abs() <= cfg.tol) {
        return Err(CliError::Failed(format!(
            "delta/F0 = {ratio}: numeric chi {} differs from {chi_analytic} by more than {}",
            est.chi, cfg.tol
        )));
    }
    Ok(SweepRow {
        delta_over_f0: ratio,
        tau: cyclic_period(p.delta, p.f0_amp),
        chi_analytic,
        chi_numeric: est.chi,
        aa_phase: aa_phase_numeric(&p, cfg.steps)?,
        rotation_angle: PI - est.chi,
        leakage: est.leakage,
        audit_max: geometric_audit(&p, &env, &grid)?,
        rwa_flag: rwa_warning(&p, cfg.carrier, &RwaThresholds::default()).is_some(),
    })
}

/// One row per ratio, in input order.
pub fn run_sweep(cfg: &SweepConfig, ratios: &[f64]) -> CliResult<Vec<SweepRow>> {
    ratios.par_iter().map(|&r| row(cfg, r)).collect()
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| if k + 1 == count { stop } else { start + (stop - start) * k as f64 / (count - 1) as f64 })
            .collect(),
    }
}

pub fn to_report(rows: &[SweepRow]) -> Report {
    let columns: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut report = Report::new("sweep", &columns);
    for r in rows {
        report.push(vec![
            r.delta_over_f0.into(),
            r.tau.into(),
            r.chi_analytic.into(),
            r.chi_numeric.into(),
            r.aa_phase.into(),
            r.rotation_angle.into(),
            r.leakage.into(),
            r.audit_max.into(),
            r.rwa_flag.into(),
        ]);
    }
    report
}
