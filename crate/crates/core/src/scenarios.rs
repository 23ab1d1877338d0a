//! Initial conditions for the built-in scenarios.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::fields::MomentumField;
use crate::grid::{Grid, PhaseField};

/// Normalized Maxwellian with thermal speed `vt`, centered at `u`.
pub fn maxwellian(p: f64, u: f64, vt: f64) -> f64 {
    let x = (p - u) / vt;
    (-0.5 * x * x).exp() / ((2.0 * PI).sqrt() * vt)
}

/// Spatially uniform unit Maxwellian.
pub fn uniform(grid: &Arc<Grid>) -> PhaseField {
    PhaseField::from_fn(grid, |_, p| maxwellian(p, 0.0, 1.0))
}

/// `(1 + ε cos kq) M(p)`
pub fn landau(grid: &Arc<Grid>, epsilon: f64, k: f64) -> PhaseField {
    PhaseField::from_fn(grid, |q, p| (1.0 + epsilon * (k * q).cos()) * maxwellian(p, 0.0, 1.0))
}

/// Two counter-streaming Maxwellians at `±v0`, perturbed by `ε cos kq`.
pub fn two_stream(grid: &Arc<Grid>, epsilon: f64, k: f64, v0: f64, vt: f64) -> PhaseField {
    PhaseField::from_fn(grid, |q, p| {
        0.5 * (maxwellian(p, v0, vt) + maxwellian(p, -v0, vt)) * (1.0 + epsilon * (k * q).cos())
    })
}

/// Synthetic one-form that decays in p, built on the fundamental wavenumber
/// of the q box so it is periodic for any `l_q`.
pub fn decaying_momentum(grid: &Arc<Grid>) -> MomentumField {
    let k = 2.0 * PI / grid.spec().l_q;
    MomentumField {
        pi_q: PhaseField::from_fn(grid, |q, p| (1.0 + 0.4 * (k * q).cos()) * (-p * p / 2.0).exp() * (1.0 + 0.3 * p)),
        pi_p: PhaseField::from_fn(grid, |q, p| (0.3 * (k * q).sin() + 0.2 * (2.0 * k * q).cos() * p) * (-p * p / 3.0).exp()),
    }
}

/// Smooth p-decaying test function; `phase` selects a member of the family.
pub fn decaying_function(grid: &Arc<Grid>, phase: f64) -> PhaseField {
    let k = 2.0 * PI / grid.spec().l_q;
    PhaseField::from_fn(grid, |q, p| ((k * q + phase).sin() + p * (2.0 * k * q - phase).cos()) * (-p * p / 3.0).exp())
}

/// Smooth gauge function `χ = A sin(kq) e^{-p²/4}`.
pub fn gauge_function(grid: &Arc<Grid>, amplitude: f64, k: f64) -> PhaseField {
    PhaseField::from_fn(grid, |q, p| amplitude * (k * q).sin() * (-0.25 * p * p).exp())
}

/// Taylor-Green vorticity `ω = −2 cos x cos y` on the doubly periodic square.
pub fn taylor_green(grid: &Arc<Grid>) -> PhaseField {
    PhaseField::from_fn(grid, |x, y| -2.0 * x.cos() * y.cos())
}
