// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear algebra on the three-level space and the
//! qubit subspace.
//!
//! The basis order is fixed everywhere as `(|0⟩, |1⟩, |e⟩)`, i.e. indices
//! 0, 1 and 2. The first two span the computational subspace.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity defect above which `expm_hermitian` refuses its input.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Unitarity defect above which gate metrics refuse their inputs.
pub const UNITARY_TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Index of the excited level.
pub const EXCITED: usize = 2;

/// A state vector over `(|0⟩, |1⟩, |e⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket3(pub [C64; 3]);

impl Ket3 {
    pub const fn new(c0: C64, c1: C64, ce: C64) -> Self {
        Ket3([c0, c1, ce])
    }

    pub fn zero() -> Self {
        Ket3([ZERO; 3])
    }

    /// The basis ket `|i⟩`.
    pub fn basis(i: usize) -> Self {
        let mut k = Self::zero();
        k.0[i] = ONE;
        k
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket3) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() < tol
    }

    /// The projector `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket3) -> Operator3 {
        let mut m = Operator3::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = self.0[r] * other.0[c].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Ket3 {
        Ket3(self.0.map(|c| c * s))
    }

    /// Largest absolute component difference.
    pub fn max_diff(&self, other: &Ket3) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Ket3 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for Ket3 {
    type Output = Ket3;
    fn add(self, rhs: Ket3) -> Ket3 {
        Ket3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for Ket3 {
    type Output = Ket3;
    fn sub(self, rhs: Ket3) -> Ket3 {
        Ket3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

/// A 3×3 complex operator, row-major over `(|0⟩, |1⟩, |e⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator3(pub [[C64; 3]; 3]);

impl Operator3 {
    pub fn zeros() -> Self {
        Operator3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    /// `|e⟩⟨e|`.
    pub fn excited_projector() -> Self {
        Self::diag([0.0, 0.0, 1.0])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn column(&self, c: usize) -> Ket3 {
        Ket3([self.0[0][c], self.0[1][c], self.0[2][c]])
    }

    pub fn apply(&self, k: &Ket3) -> Ket3 {
        let mut out = Ket3::zero();
        for r in 0..3 {
            out.0[r] = (0..3).map(|c| self.0[r][c] * k.0[c]).sum();
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|row| row.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &Operator3) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn commutator(&self, other: &Operator3) -> Operator3 {
        *self * *other - *other * *self
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }
}

impl Index<(usize, usize)> for Operator3 {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Operator3 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}

impl Add for Operator3 {
    type Output = Operator3;
    fn add(self, rhs: Operator3) -> Operator3 {
        Operator3::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl Sub for Operator3 {
    type Output = Operator3;
    fn sub(self, rhs: Operator3) -> Operator3 {
        Operator3::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl Mul for Operator3 {
    type Output = Operator3;
    fn mul(self, rhs: Operator3) -> Operator3 {
        Operator3::from_fn(|r, c| (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum())
    }
}

impl Mul<f64> for Operator3 {
    type Output = Operator3;
    fn mul(self, s: f64) -> Operator3 {
        self.scale(C64::new(s, 0.0))
    }
}

impl Mul<Ket3> for Operator3 {
    type Output = Ket3;
    fn mul(self, k: Ket3) -> Ket3 {
        self.apply(&k)
    }
}

impl fmt::Display for Operator3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            for c in row {
                write!(f, "{:>12.6}{:+.6}i ", c.re, c.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A 2×2 complex matrix over `(|0⟩, |1⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitGate(pub [[C64; 2]; 2]);

impl QubitGate {
    pub fn new(m: [[C64; 2]; 2]) -> Self {
        QubitGate(m)
    }

    pub fn identity() -> Self {
        QubitGate([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn pauli_x() -> Self {
        QubitGate([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        let i = C64::i();
        QubitGate([[ZERO, -i], [i, ZERO]])
    }

    pub fn pauli_z() -> Self {
        QubitGate([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// `v·σ` for a real 3-vector `v`.
    pub fn pauli_dot(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        QubitGate([[C64::new(z, 0.0), C64::new(x, -y)], [C64::new(x, y), C64::new(-z, 0.0)]])
    }

    /// `cos(angle/2)·1 − i·sin(angle/2)·axis·σ`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::identity().scale(C64::new(c, 0.0)) + Self::pauli_dot(axis).scale(C64::new(0.0, -s))
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> C64) -> Self {
        QubitGate([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|row| row.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &QubitGate) -> f64 {
        (*self - *other).max_abs()
    }

    /// `max |U†U − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).max_abs()
    }

    /// Rescales to unit determinant. The square-root branch is the
    /// principal one, so the result is defined up to an overall sign.
    pub fn to_special_unitary(&self) -> Self {
        let root = self.det().sqrt();
        self.scale(root.inv())
    }

    /// Expands an SU(2) element as `a0·1 − i·a·σ`, returning `(a0, a)`.
    /// Meaningful only for unit-determinant unitaries.
    pub fn su2_coordinates(&self) -> (f64, [f64; 3]) {
        let m = &self.0;
        let a0 = 0.5 * (m[0][0].re + m[1][1].re);
        let az = 0.5 * (m[1][1].im - m[0][0].im);
        let ax = -0.5 * (m[0][1].im + m[1][0].im);
        let ay = 0.5 * (m[1][0].re - m[0][1].re);
        (a0, [ax, ay, az])
    }

    /// Eigenvalues and unit eigenvectors of a normal 2×2 matrix.
    pub fn eigen_normal(&self) -> [(C64, [C64; 2]); 2] {
        let [[a, b], [c, d]] = self.0;
        let half_tr = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
        let lambdas = [half_tr + disc, half_tr - disc];
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        lambdas.map(|l| {
            let v1 = [b, l - a];
            let v2 = [l - d, c];
            let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
            let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
            let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
            if n.sqrt() <= 1e-14 * scale {
                // proportional to the identity: any basis works
                return (l, [ONE, ZERO]);
            }
            let inv = 1.0 / n.sqrt();
            (l, [v[0] * inv, v[1] * inv])
        })
    }
}

impl Index<(usize, usize)> for QubitGate {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl Add for QubitGate {
    type Output = QubitGate;
    fn add(self, rhs: QubitGate) -> QubitGate {
        QubitGate::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl Sub for QubitGate {
    type Output = QubitGate;
    fn sub(self, rhs: QubitGate) -> QubitGate {
        QubitGate::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl Neg for QubitGate {
    type Output = QubitGate;
    fn neg(self) -> QubitGate {
        self.scale(-ONE)
    }
}

impl Mul for QubitGate {
    type Output = QubitGate;
    fn mul(self, rhs: QubitGate) -> QubitGate {
        QubitGate::from_fn(|r, c| self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c])
    }
}

impl fmt::Display for QubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            for c in row {
                write!(f, "{:>12.6}{:+.6}i ", c.re, c.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone, Copy)]
pub struct Eigh {
    /// Ascending eigenvalues.
    pub values: [f64; 3],
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Operator3,
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic complex Jacobi diagonalization. Only the Hermitian part of `h`
/// is used.
pub fn eigh(h: &Operator3) -> Eigh {
    let mut a = (*h + h.adjoint()) * 0.5;
    let mut v = Operator3::identity();
    let frob: f64 = a.0.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = [(0, 1), (0, 2), (1, 2)].iter().map(|&(p, q)| a.0[p][q].norm_sqr()).sum::<f64>().sqrt();
        if off <= 1e-18 * frob || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let z = a.0[p][q];
            let r = z.norm();
            if r == 0.0 {
                continue;
            }
            // phase-align the pair, then a real Givens rotation
            let phase = C64::from_polar(1.0, -z.arg());
            let theta = 0.5 * (2.0 * r).atan2(a.0[p][p].re - a.0[q][q].re);
            let (s, c) = theta.sin_cos();
            let mut j = Operator3::identity();
            j.0[p][p] = C64::new(c, 0.0);
            j.0[p][q] = C64::new(-s, 0.0);
            j.0[q][p] = phase * s;
            j.0[q][q] = phase * c;
            a = j.adjoint() * a * j;
            v = v * j;
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &k| a.0[i][i].re.total_cmp(&a.0[k][k].re));
    let values = order.map(|i| a.0[i][i].re);
    let vectors = Operator3::from_fn(|r, c| v.0[r][order[c]]);
    Eigh { values, vectors }
}

/// `exp(−i·H·t)` by spectral decomposition.
pub fn expm_hermitian(h: &Operator3, t: f64) -> Result<Operator3> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitianInput { defect });
    }
    let Eigh { values, vectors } = eigh(h);
    let mut u = Operator3::zeros();
    for (k, lambda) in values.iter().enumerate() {
        let col = vectors.column(k);
        let phase = C64::from_polar(1.0, -lambda * t);
        u = u + col.outer(&col).scale(phase);
    }
    Ok(u)
}

/// `max |U†U − 1|`.
pub fn unitarity_defect(u: &Operator3) -> f64 {
    (u.adjoint() * *u - Operator3::identity()).max_abs()
}

/// Population transferred out of the computational subspace,
/// `|⟨e|U|0⟩|² + |⟨e|U|1⟩|²`.
pub fn leakage(u: &Operator3) -> f64 {
    u.0[EXCITED][0].norm_sqr() + u.0[EXCITED][1].norm_sqr()
}

/// Upper-left 2×2 block `P_M·U·P_M` together with the leakage out of `M`.
pub fn project_to_qubit(u: &Operator3) -> (QubitGate, f64) {
    let gate = QubitGate::from_fn(|r, c| u.0[r][c]);
    (gate, leakage(u))
}

fn check_unitary(g: &QubitGate) -> Result<()> {
    let defect = g.unitarity_defect();
    if defect > UNITARY_TOL || !defect.is_finite() {
        return Err(Error::NonUnitaryInput { defect });
    }
    Ok(())
}

/// `1 − |Tr(U†V)|/2`, blind to the global phase of either argument.
pub fn gate_distance(u: &QubitGate, v: &QubitGate) -> Result<f64> {
    check_unitary(u)?;
    check_unitary(v)?;
    let overlap = (u.adjoint() * *v).trace().norm() * 0.5;
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_generator_gives_identity() {
        let u = expm_hermitian(&Operator3::zeros(), 3.7).unwrap();
        assert!(u.max_diff(&Operator3::identity()) < 1e-15);
    }

    #[test]
    fn excited_projector_half_turn() {
        let u = expm_hermitian(&Operator3::excited_projector(), PI).unwrap();
        assert!(u.max_diff(&Operator3::diag([1.0, 1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn resonant_pi_pulse_on_zero_excited_pair() {
        // H = |e⟩⟨0| + |0⟩⟨e|: the (0, e) block is σ_x, exp(−iπσ_x) = −1
        let mut h = Operator3::zeros();
        h[(2, 0)] = c(1.0, 0.0);
        h[(0, 2)] = c(1.0, 0.0);
        let u = expm_hermitian(&h, PI).unwrap();
        assert!(u.max_diff(&Operator3::diag([-1.0, 1.0, -1.0])) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = Operator3::zeros();
        h[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(expm_hermitian(&h, 1.0), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn unitarity_defect_examples() {
        assert_eq!(unitarity_defect(&Operator3::identity()), 0.0);
        assert_eq!(unitarity_defect(&Operator3::diag([1.0, 1.0, 2.0])), 3.0);
    }

    #[test]
    fn projection_examples() {
        let (g, l) = project_to_qubit(&Operator3::identity());
        assert_eq!(g, QubitGate::identity());
        assert_eq!(l, 0.0);

        let mut swap = Operator3::zeros();
        swap[(0, 2)] = c(1.0, 0.0);
        swap[(2, 0)] = c(1.0, 0.0);
        swap[(1, 1)] = c(1.0, 0.0);
        assert_eq!(project_to_qubit(&swap).1, 1.0);
    }

    #[test]
    fn distance_examples() {
        let x = QubitGate::pauli_x();
        let y = QubitGate::pauli_y();
        assert_eq!(gate_distance(&x, &x).unwrap(), 0.0);
        let phased = x.scale(C64::from_polar(1.0, 0.83));
        assert!(gate_distance(&x, &phased).unwrap() < 1e-15);
        assert!((gate_distance(&x, &y).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_rejects_non_unitary() {
        let bad = QubitGate::identity().scale(c(2.0, 0.0));
        assert!(matches!(gate_distance(&bad, &QubitGate::identity()), Err(Error::NonUnitaryInput { .. })));
    }

    #[test]
    fn distance_is_not_a_metric_but_its_root_is() {
        // 1 − |cos x| is convex near zero, so collinear small rotations
        // violate the triangle inequality; sqrt of it does not.
        let u = QubitGate::identity();
        let v = QubitGate::rotation([0.0, 0.0, 1.0], 0.2);
        let w = QubitGate::rotation([0.0, 0.0, 1.0], 0.4);
        let d = |a: &QubitGate, b: &QubitGate| gate_distance(a, b).unwrap();
        assert!(d(&u, &w) > d(&u, &v) + d(&v, &w));
        assert!(d(&u, &w).sqrt() <= d(&u, &v).sqrt() + d(&v, &w).sqrt());
    }

    #[test]
    fn eigen_normal_on_pauli_y() {
        for (l, v) in QubitGate::pauli_y().eigen_normal() {
            let g = QubitGate::pauli_y();
            let gv = [g.0[0][0] * v[0] + g.0[0][1] * v[1], g.0[1][0] * v[0] + g.0[1][1] * v[1]];
            assert!((gv[0] - l * v[0]).norm() < 1e-14);
            assert!((gv[1] - l * v[1]).norm() < 1e-14);
        }
    }

    #[test]
    fn su2_coordinates_roundtrip() {
        let axis = [0.48, -0.6, 0.64];
        let g = QubitGate::rotation(axis, 1.1);
        let (a0, a) = g.su2_coordinates();
        assert!((a0 - (0.55f64).cos()).abs() < 1e-15);
        for i in 0..3 {
            assert!((a[i] - (0.55f64).sin() * axis[i]).abs() < 1e-15);
        }
    }
}
