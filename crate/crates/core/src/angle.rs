// SPDX-License-Identifier: Apache-2.0

//! Canonical angle branches.

use std::f64::consts::{PI, TAU};

/// Maps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn wrap_positive(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}
