// SPDX-License-Identifier: Apache-2.0

//! The driven Λ system: control parameters, pulse envelopes, the
//! rotating-frame Hamiltonian and the dark/bright frames it defines.
//!
//! Frequencies are angular frequencies in units of the pulse amplitude
//! scale (typically `F₀ = 1`), times are in the inverse unit.

use std::f64::consts::PI;

use crate::angle::wrap_positive;
use crate::error::{Error, Result};
use crate::linalg::{Ket3, Operator3, C64, EXCITED};

/// Polar angles closer than this to a pole have `phi` canonicalized to 0.
const POLE_TOL: f64 = 1e-12;

/// Control tuple of one pulse pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserParams {
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
    pub f0_amp: f64,
}

impl LaserParams {
    /// Validates and canonicalizes: `phi` is wrapped into `[0, 2π)` and set
    /// to zero at the poles `theta ∈ {0, π}`.
    pub fn new(theta: f64, phi: f64, delta: f64, f0_amp: f64) -> Result<Self> {
        for (name, v) in [("theta", theta), ("phi", phi), ("delta", delta), ("f0_amp", f0_amp)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParams(format!("theta must lie in [0, pi], got {theta}")));
        }
        if f0_amp <= 0.0 {
            return Err(Error::InvalidParams(format!("f0_amp must be positive, got {f0_amp}")));
        }
        let at_pole = theta < POLE_TOL || PI - theta < POLE_TOL;
        let phi = if at_pole { 0.0 } else { wrap_positive(phi) };
        Ok(LaserParams { theta, phi, delta, f0_amp })
    }

    pub fn resonant(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, phi, 0.0, 1.0)
    }

    /// `√(δ² + 4F₀²)`, the splitting of the bright doublet.
    pub fn omega(&self) -> f64 {
        self.delta.hypot(2.0 * self.f0_amp)
    }

    pub fn axis(&self) -> BlochAxis {
        axis_from_angles(self.theta, self.phi)
    }

    /// The Rabi frequencies `(f₀(t), f₁(t))` for envelope value `f`.
    pub fn rabi_frequencies(&self, f: f64) -> (C64, C64) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        (C64::from_polar(f * s, -self.phi), C64::new(-f * c, 0.0))
    }

    /// The drive operator `H₀`, normalized so that `H₀|b⟩ = |e⟩`.
    pub fn drive_operator(&self) -> Operator3 {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let to_zero = C64::from_polar(s, -self.phi);
        let to_one = C64::new(-c, 0.0);
        let mut h = Operator3::zeros();
        h[(EXCITED, 0)] = to_zero;
        h[(0, EXCITED)] = to_zero.conj();
        h[(EXCITED, 1)] = to_one;
        h[(1, EXCITED)] = to_one;
        h
    }

    /// `F₀·H₀ + δ|e⟩⟨e|`, the generator during a square pulse.
    pub fn square_generator(&self) -> Operator3 {
        self.generator(self.f0_amp)
    }

    pub(crate) fn generator(&self, f: f64) -> Operator3 {
        let mut h = self.drive_operator() * f;
        h[(EXCITED, EXCITED)] += C64::new(self.delta, 0.0);
        h
    }
}

/// Unit rotation axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAxis([f64; 3]);

impl BlochAxis {
    /// Normalizes `v`; fails on the zero vector or non-finite input.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::InvalidParams(format!("axis {v:?} cannot be normalized")));
        }
        Ok(BlochAxis(v.map(|x| x / n)))
    }

    pub const fn z() -> Self {
        BlochAxis([0.0, 0.0, 1.0])
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &BlochAxis) -> f64 {
        dot(self.0, other.0)
    }

    /// The `(theta, phi)` pair that `axis_from_angles` maps onto this axis.
    pub fn angles(&self) -> (f64, f64) {
        let [x, y, z] = self.0;
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = if x.hypot(y) < POLE_TOL { 0.0 } else { wrap_positive((-y).atan2(x)) };
        (theta, phi)
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Rotation axis realized by a pulse pair with angles `(theta, phi)`:
/// `(sinθ cosφ, −sinθ sinφ, cosθ)`.
///
/// The dark state `cos(θ/2)|0⟩ + e^{−iφ} sin(θ/2)|1⟩` is the `+1`
/// eigenvector of `n·σ` with `σ_y = −i|0⟩⟨1| + i|1⟩⟨0|`, which fixes the
/// sign of the `y` component.
pub fn axis_from_angles(theta: f64, phi: f64) -> BlochAxis {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    BlochAxis([st * cp, -st * sp, ct])
}

/// Dark and bright states `(|d⟩, |b⟩)` of the drive.
pub fn dark_bright(theta: f64, phi: f64) -> (Ket3, Ket3) {
    let (s, c) = (0.5 * theta).sin_cos();
    let zero = C64::new(0.0, 0.0);
    let dark = Ket3::new(C64::new(c, 0.0), C64::from_polar(s, -phi), zero);
    let bright = Ket3::new(C64::from_polar(s, phi), C64::new(-c, 0.0), zero);
    (dark, bright)
}

/// Eigenbasis of the square-pulse generator inside `span{|b⟩, |e⟩}`.
#[derive(Debug, Clone, Copy)]
pub struct BrightEigen {
    /// Mixing angle in `(0, π/2)` with `tan ν = (δ + √(δ²+4F₀²)) / 2F₀`.
    pub nu: f64,
    /// Eigenstate with energy `(δ + Ω)/2`.
    pub plus: Ket3,
    /// Eigenstate with energy `(δ − Ω)/2`.
    pub minus: Ket3,
    pub energy_plus: f64,
    pub energy_minus: f64,
}

/// Bright doublet of `F₀H₀ + δ|e⟩⟨e|`.
///
/// Phases are fixed so that `⟨±|b⟩ ≥ 0`, giving
/// `|b⟩ = cos ν |+⟩ + sin ν |−⟩`.
pub fn bright_eigen(p: &LaserParams) -> BrightEigen {
    let omega = p.omega();
    // δ + Ω without cancellation for large negative δ
    let upper = if p.delta >= 0.0 { p.delta + omega } else { 4.0 * p.f0_amp * p.f0_amp / (omega - p.delta) };
    let nu = (upper / (2.0 * p.f0_amp)).atan();
    let (sn, cn) = nu.sin_cos();
    let (_, bright) = dark_bright(p.theta, p.phi);
    let excited = Ket3::basis(EXCITED);
    let re = |x: f64| C64::new(x, 0.0);
    BrightEigen {
        nu,
        plus: bright.scale(re(cn)) + excited.scale(re(sn)),
        minus: bright.scale(re(sn)) - excited.scale(re(cn)),
        energy_plus: 0.5 * upper,
        energy_minus: 0.5 * (p.delta - omega),
    }
}

/// `F(t)·H₀ + δ|e⟩⟨e|`.
pub fn hamiltonian(p: &LaserParams, env: &PulseEnvelope, t: f64) -> Operator3 {
    p.generator(env.value(t))
}

/// Shape of a pulse envelope before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeSpec {
    Square {
        amplitude: f64,
        duration: f64,
    },
    /// Gaussian truncated to `[0, duration]`.
    Gaussian {
        peak: f64,
        center: f64,
        width: f64,
        duration: f64,
    },
    /// Samples on a uniform grid spanning `[0, duration]`, linearly
    /// interpolated.
    Tabulated {
        samples: Vec<f64>,
        duration: f64,
    },
}

/// Number of trapezoid panels used for the area of analytic shapes.
const AREA_PANELS: usize = 20_000;

/// A validated real envelope `F(t)`, zero outside `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseEnvelope {
    spec: EnvelopeSpec,
}

pub fn make_envelope(spec: EnvelopeSpec) -> Result<PulseEnvelope> {
    let bad = |msg: String| Err(Error::BadEnvelopeSpec(msg));
    let duration = match &spec {
        EnvelopeSpec::Square { duration, .. }
        | EnvelopeSpec::Gaussian { duration, .. }
        | EnvelopeSpec::Tabulated { duration, .. } => *duration,
    };
    if !(duration.is_finite() && duration > 0.0) {
        return bad(format!("duration must be positive and finite, got {duration}"));
    }
    match &spec {
        EnvelopeSpec::Square { amplitude, .. } => {
            if !amplitude.is_finite() {
                return bad(format!("amplitude must be finite, got {amplitude}"));
            }
        }
        EnvelopeSpec::Gaussian { peak, center, width, .. } => {
            if !(peak.is_finite() && center.is_finite()) {
                return bad("gaussian peak and center must be finite".into());
            }
            if !(width.is_finite() && *width > 0.0) {
                return bad(format!("gaussian width must be positive, got {width}"));
            }
        }
        EnvelopeSpec::Tabulated { samples, .. } => {
            if samples.len() < 2 {
                return bad(format!("tabulated envelope needs at least 2 samples, got {}", samples.len()));
            }
            if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
                return bad(format!("sample {i} is not finite"));
            }
        }
    }
    Ok(PulseEnvelope { spec })
}

impl PulseEnvelope {
    pub fn square(amplitude: f64, duration: f64) -> Result<Self> {
        make_envelope(EnvelopeSpec::Square { amplitude, duration })
    }

    /// Gaussian centred in `[0, duration]` with its peak scaled so that the
    /// trapezoid area equals `area`.
    pub fn gaussian_with_area(area: f64, width: f64, duration: f64) -> Result<Self> {
        let unit = make_envelope(EnvelopeSpec::Gaussian { peak: 1.0, center: 0.5 * duration, width, duration })?;
        make_envelope(EnvelopeSpec::Gaussian { peak: area / unit.area(), center: 0.5 * duration, width, duration })
    }

    pub fn spec(&self) -> &EnvelopeSpec {
        &self.spec
    }

    pub fn duration(&self) -> f64 {
        match &self.spec {
            EnvelopeSpec::Square { duration, .. }
            | EnvelopeSpec::Gaussian { duration, .. }
            | EnvelopeSpec::Tabulated { duration, .. } => *duration,
        }
    }

    pub fn is_square(&self) -> bool {
        matches!(self.spec, EnvelopeSpec::Square { .. })
    }

    pub fn value(&self, t: f64) -> f64 {
        let duration = self.duration();
        if !(0.0..=duration).contains(&t) {
            return 0.0;
        }
        match &self.spec {
            EnvelopeSpec::Square { amplitude, .. } => *amplitude,
            EnvelopeSpec::Gaussian { peak, center, width, .. } => {
                let x = (t - center) / width;
                peak * (-0.5 * x * x).exp()
            }
            EnvelopeSpec::Tabulated { samples, .. } => {
                let panels = samples.len() - 1;
                let pos = t / duration * panels as f64;
                let i = (pos.floor() as usize).min(panels - 1);
                let frac = pos - i as f64;
                samples[i] + (samples[i + 1] - samples[i]) * frac
            }
        }
    }

    /// Pulse area `∫F dt`; exact for square and tabulated shapes,
    /// trapezoid rule for the Gaussian.
    pub fn area(&self) -> f64 {
        match &self.spec {
            EnvelopeSpec::Square { amplitude, duration } => amplitude * duration,
            EnvelopeSpec::Tabulated { samples, duration } => {
                let h = duration / (samples.len() - 1) as f64;
                trapezoid(samples, h)
            }
            EnvelopeSpec::Gaussian { duration, .. } => {
                let h = duration / AREA_PANELS as f64;
                let values: Vec<f64> = (0..=AREA_PANELS).map(|k| self.value(k as f64 * h)).collect();
                trapezoid(&values, h)
            }
        }
    }
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[values.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn square_for(p: &LaserParams, duration: f64) -> PulseEnvelope {
        PulseEnvelope::square(p.f0_amp, duration).unwrap()
    }

    #[test]
    fn hamiltonian_resonant_theta_pi() {
        let p = LaserParams::new(PI, 0.0, 0.0, 1.0).unwrap();
        let h = hamiltonian(&p, &square_for(&p, PI), 1.0);
        let mut expected = Operator3::zeros();
        expected[(2, 0)] = C64::new(1.0, 0.0);
        expected[(0, 2)] = C64::new(1.0, 0.0);
        assert!(h.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn hamiltonian_off_pulse_is_detuning_only() {
        let p = LaserParams::new(1.1, 0.4, 0.7, 1.0).unwrap();
        let env = square_for(&p, 2.0);
        for t in [-1.0, 2.5] {
            let h = hamiltonian(&p, &env, t);
            assert!(h.max_diff(&(Operator3::excited_projector() * 0.7)) < 1e-15);
        }
    }

    #[test]
    fn hamiltonian_substitution_example() {
        let p = LaserParams::new(FRAC_PI_2, FRAC_PI_2, 2.0, 1.0).unwrap();
        let h = hamiltonian(&p, &square_for(&p, 1.0), 0.5);
        assert_abs_diff_eq!(h[(2, 0)].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(2, 0)].im, -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(2, 1)].re, -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(0, 2)].im, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(h[(2, 2)].re, 2.0, epsilon = 1e-15);
        assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn dark_bright_examples() {
        let (d, b) = dark_bright(0.0, 0.0);
        assert!(d.max_diff(&Ket3::basis(0)) < 1e-15);
        assert!(b.max_diff(&Ket3::basis(1).scale(C64::new(-1.0, 0.0))) < 1e-15);

        let (d, b) = dark_bright(PI, 0.0);
        assert!(d.max_diff(&Ket3::basis(1)) < 1e-15);
        assert!(b.max_diff(&Ket3::basis(0)) < 1e-15);

        let (d, _) = dark_bright(FRAC_PI_2, FRAC_PI_4);
        let expected =
            Ket3::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4), C64::new(0.0, 0.0));
        assert!(d.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn axis_examples() {
        let close = |a: BlochAxis, b: [f64; 3]| a.vector().iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        assert!(close(axis_from_angles(0.0, 0.0), [0.0, 0.0, 1.0]));
        assert!(close(axis_from_angles(FRAC_PI_2, 0.0), [1.0, 0.0, 0.0]));
        // y sign follows the e^{-iφ} dark-state convention
        assert!(close(axis_from_angles(PI / 3.0, FRAC_PI_2), [0.0, -(3f64.sqrt()) / 2.0, 0.5]));
    }

    #[test]
    fn axis_angles_roundtrip() {
        for (theta, phi) in [(0.3, 0.2), (1.2, 4.0), (2.9, 6.1), (FRAC_PI_2, PI)] {
            let (t, p) = axis_from_angles(theta, phi).angles();
            assert_abs_diff_eq!(t, theta, epsilon = 1e-12);
            assert_abs_diff_eq!(p, phi, epsilon = 1e-12);
        }
    }

    #[test]
    fn params_validation_and_canonical_phi() {
        assert!(LaserParams::new(4.0, 0.0, 0.0, 1.0).is_err());
        assert!(LaserParams::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(LaserParams::new(1.0, f64::NAN, 0.0, 1.0).is_err());
        assert_eq!(LaserParams::new(0.0, 1.3, 0.0, 1.0).unwrap().phi, 0.0);
        assert_eq!(LaserParams::new(PI, 1.3, 0.0, 1.0).unwrap().phi, 0.0);
        let p = LaserParams::new(1.0, -0.5, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.phi, 2.0 * PI - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rabi_frequencies_match_drive_operator() {
        let p = LaserParams::new(1.3, 0.9, 0.2, 1.7).unwrap();
        let (f0, f1) = p.rabi_frequencies(1.7);
        let h = p.square_generator();
        assert!((h[(2, 0)] - f0).norm() < 1e-15);
        assert!((h[(2, 1)] - f1).norm() < 1e-15);
    }

    #[test]
    fn bright_eigen_nu_examples() {
        let nu = |delta: f64| bright_eigen(&LaserParams::new(1.0, 0.0, delta, 1.0).unwrap()).nu;
        assert_abs_diff_eq!(nu(0.0), FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(nu(2.0), 3.0 * PI / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!((1.0 + SQRT_2).atan(), 3.0 * PI / 8.0, epsilon = 1e-15);
        assert!(FRAC_PI_2 - nu(1e8) < 1e-7);
        assert!(nu(-1e8) > 0.0 && nu(-1e8) < 1e-7);
    }

    #[test]
    fn bright_eigen_are_eigenstates() {
        for delta in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            let p = LaserParams::new(1.1, 2.3, delta, 0.8).unwrap();
            let be = bright_eigen(&p);
            let h = p.square_generator();
            for (k, e) in [(be.plus, be.energy_plus), (be.minus, be.energy_minus)] {
                assert!(h.apply(&k).max_diff(&k.scale(C64::new(e, 0.0))) < 1e-14);
                assert!(k.is_normalized(1e-14));
            }
            assert!(be.plus.inner(&be.minus).norm() < 1e-15);
            let (_, b) = dark_bright(p.theta, p.phi);
            let (sn, cn) = be.nu.sin_cos();
            assert_abs_diff_eq!(be.plus.inner(&b).re, cn, epsilon = 1e-15);
            assert_abs_diff_eq!(be.minus.inner(&b).re, sn, epsilon = 1e-15);
            let omega = p.omega();
            let residual = be.nu.tan() * 2.0 * p.f0_amp - p.delta - omega;
            assert!(residual.abs() < 1e-10 * omega.max(1.0));
        }
    }

    #[test]
    fn envelope_areas() {
        assert_abs_diff_eq!(PulseEnvelope::square(1.0, PI).unwrap().area(), PI);
        assert_abs_diff_eq!(PulseEnvelope::square(2.0, FRAC_PI_2).unwrap().area(), PI);
        let tab = make_envelope(EnvelopeSpec::Tabulated { samples: vec![0.0, 1.0, 1.0, 0.0], duration: 3.0 }).unwrap();
        assert_abs_diff_eq!(tab.area(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tab.value(0.5), 0.5, epsilon = 1e-15);
        assert_eq!(tab.value(3.5), 0.0);
    }

    #[test]
    fn gaussian_area_against_erf_free_quadrature() {
        // independent composite Simpson on a finer grid
        let env = make_envelope(EnvelopeSpec::Gaussian { peak: 1.0, center: 5.0, width: 1.0, duration: 10.0 }).unwrap();
        let n = 200_000;
        let h = 10.0 / n as f64;
        let f = |t: f64| (-0.5 * (t - 5.0) * (t - 5.0)).exp();
        let simpson: f64 = (0..=n)
            .map(|k| {
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * f(k as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert_abs_diff_eq!(env.area(), simpson, epsilon = 1e-9);
        // √(2π)·erf(5/√2) ≈ √(2π)(1 − 5.7e-7)
        assert_abs_diff_eq!(env.area(), (2.0 * PI).sqrt(), epsilon = 2e-6);
    }

    #[test]
    fn bad_envelopes() {
        assert!(PulseEnvelope::square(1.0, 0.0).is_err());
        assert!(make_envelope(EnvelopeSpec::Gaussian { peak: 1.0, center: 0.0, width: 0.0, duration: 1.0 }).is_err());
        assert!(make_envelope(EnvelopeSpec::Tabulated { samples: vec![1.0], duration: 1.0 }).is_err());
    }

    #[test]
    fn gaussian_with_area_hits_target() {
        let env = PulseEnvelope::gaussian_with_area(PI, 0.8, 6.0).unwrap();
        assert_abs_diff_eq!(env.area(), PI, epsilon = 1e-12);
    }
}
