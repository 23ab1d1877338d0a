//! Classical fixed-step RK4, shared by every formulation.

use crate::error::{Error, Result};
use crate::fields::{MomentumField, PhysParams};
use crate::grid::{Grid, PhaseField};

pub trait OdeState: Clone {
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn is_finite(&self) -> bool;
}

impl OdeState for PhaseField {
    fn axpy(&mut self, a: f64, x: &Self) {
        PhaseField::axpy(self, a, x)
    }
    fn is_finite(&self) -> bool {
        PhaseField::is_finite(self)
    }
}

impl OdeState for MomentumField {
    fn axpy(&mut self, a: f64, x: &Self) {
        MomentumField::axpy(self, a, x)
    }
    fn is_finite(&self) -> bool {
        MomentumField::is_finite(self)
    }
}

pub fn rk4_step<S: OdeState>(y: &S, dt: f64, mut rhs: impl FnMut(&S) -> Result<S>) -> Result<S> {
    if !dt.is_finite() || dt < 0.0 {
        return Err(Error::InvalidParams(format!("time step must be finite and non-negative, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(y.clone());
    }
    let k1 = rhs(y)?;
    let mut stage = y.clone();
    stage.axpy(0.5 * dt, &k1);
    let k2 = rhs(&stage)?;
    stage = y.clone();
    stage.axpy(0.5 * dt, &k2);
    let k3 = rhs(&stage)?;
    stage = y.clone();
    stage.axpy(dt, &k3);
    let k4 = rhs(&stage)?;

    let mut out = y.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    if !out.is_finite() {
        return Err(Error::NonFinite { what: "state".into(), step: 0 });
    }
    Ok(out)
}

/// Advisory explicit-stability bound `0.5 min(Δq m / p_max, Δp / (|e| max|∂_qφ|))`.
pub fn cfl_limit(grid: &Grid, max_field: f64, params: &PhysParams) -> f64 {
    let spec = grid.spec();
    let transport = spec.dq() * params.m / spec.p_max;
    let force = params.e.abs() * max_field;
    let accel = if force > 0.0 { spec.dp() / force } else { f64::INFINITY };
    0.5 * transport.min(accel)
}

pub(crate) fn warn_if_unstable(dt: f64, limit: f64) -> bool {
    if dt > limit {
        log::warn!("time step {dt} exceeds the advisory stability bound {limit:.3e}");
        true
    } else {
        false
    }
}
