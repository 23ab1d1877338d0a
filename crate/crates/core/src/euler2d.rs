//! Incompressible 2D Euler in vorticity form on the doubly periodic square,
//! built on the same grid, bracket and RK4 kernels as the plasma solver, and
//! the side-by-side plasma/fluid report.
//!
//! The fluid grid reuses [`PhaseField`] with `x` on the q axis and `y` on a
//! spectral p axis: `n × n` points on `[0, 2π) × [−π, π)`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::density::{particle_hamiltonian, vlasov_rhs};
use crate::error::{Error, Result};
use crate::fields::{canonical_bracket, extract_density, PhysParams};
use crate::functionals::{casimirs, h_lp_f};
use crate::grid::{Grid, GridSpec, PScheme, PhaseField};
use crate::integrate::rk4_step;
use crate::momentum::init_momentum_from_density;
use crate::poisson::{constraint_residual, potential_from_density};

/// Doubly periodic `n × n` grid with side `2π`.
pub fn euler_grid(n: usize) -> Result<Arc<Grid>> {
    GridSpec::new(n, n, 2.0 * std::f64::consts::PI, std::f64::consts::PI, PScheme::Spectral)?.build()
}

/// `ψ` with `∇²ψ = ω` and zero mean.
pub fn stream_from_vorticity(omega: &PhaseField) -> Result<PhaseField> {
    let grid = omega.grid();
    let mean = omega.integrate_qp() / (grid.spec().l_q * 2.0 * grid.spec().p_max);
    if mean.abs() > 1e-12 * omega.max_abs().max(1.0) {
        return Err(Error::NotMeanFree { mean });
    }
    let psi = grid.apply_symbol_2d(omega.values(), |kx, ky| {
        let k2 = kx * kx + ky * ky;
        if k2 == 0.0 {
            0.0
        } else {
            -1.0 / k2
        }
    })?;
    PhaseField::from_array(grid, psi)
}

/// `∂_t ω = {ω, ψ}`
pub fn euler_rhs(omega: &PhaseField) -> Result<PhaseField> {
    let psi = stream_from_vorticity(omega)?;
    Ok(canonical_bracket(omega, &psi))
}

/// `−½ ∫ ψ ω dμ`
pub fn euler_energy(omega: &PhaseField) -> Result<f64> {
    Ok(-0.5 * stream_from_vorticity(omega)?.inner(omega))
}

/// `½ ∫ |∇ψ|² dμ`, equal to [`euler_energy`] for resolved fields.
pub fn euler_kinetic_energy(omega: &PhaseField) -> Result<f64> {
    let psi = stream_from_vorticity(omega)?;
    let (px, py) = (psi.ddq(), psi.ddp());
    Ok(0.5 * (px.inner(&px) + py.inner(&py)))
}

/// `½ ∫ ω² dμ`
pub fn euler_enstrophy(omega: &PhaseField) -> f64 {
    0.5 * omega.inner(omega)
}

pub fn step_rk4_euler(omega: &PhaseField, dt: f64) -> Result<PhaseField> {
    rk4_step(omega, dt, euler_rhs)
}

/// `n` RK4 steps of size `dt`; the error carries the index of the failing step.
pub fn evolve_euler(omega0: &PhaseField, dt: f64, steps: usize) -> Result<PhaseField> {
    let mut w = omega0.clone();
    for n in 0..steps {
        w = step_rk4_euler(&w, dt).map_err(|e| match e {
            Error::NonFinite { what, .. } => Error::NonFinite { what, step: n + 1 },
            other => other,
        })?;
    }
    Ok(w)
}

/// Diagnostics of one completed run, plasma or fluid.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub shape: (usize, usize),
    pub t: f64,
    /// `H_LP` or the fluid energy, initial and final.
    pub energy: (f64, f64),
    /// `∫f` or the circulation `∫ω`.
    pub first_casimir: (f64, f64),
    /// `∫f²` or twice the enstrophy.
    pub second_casimir: (f64, f64),
    /// `|⟨δH, J δH⟩|` at the final state: the discrete energy rate through the bracket.
    pub bracket_energy_rate: f64,
    /// Density from its reconstructed momentum, or vorticity from its velocity one-form.
    pub extraction_residual: f64,
    /// Residual of the elliptic constraint at the final state.
    pub constraint_residual: f64,
    /// `max |state(t) − state(0)|`
    pub state_change: f64,
}

/// Summary of a plasma run from its initial and final density.
pub fn plasma_summary(label: &str, f0: &PhaseField, f: &PhaseField, t: f64, params: &PhysParams) -> Result<RunSummary> {
    let (c0, c1) = (casimirs(f0), casimirs(f));
    let phi = potential_from_density(f, params)?;
    let h = particle_hamiltonian(&phi, params);
    let pi = init_momentum_from_density(f)?;
    Ok(RunSummary {
        label: label.to_string(),
        shape: (f.grid().n_q(), f.grid().n_p()),
        t,
        energy: (h_lp_f(f0, params)?, h_lp_f(f, params)?),
        first_casimir: (c0.mass, c1.mass),
        second_casimir: (c0.l2, c1.l2),
        bracket_energy_rate: h.inner(&vlasov_rhs(f, params)?).abs(),
        extraction_residual: extract_density(&pi).max_abs_diff(f),
        constraint_residual: constraint_residual(&phi, f, params).max_abs(),
        state_change: f.max_abs_diff(f0),
    })
}

/// Summary of a fluid run from its initial and final vorticity.
pub fn fluid_summary(label: &str, w0: &PhaseField, w: &PhaseField, t: f64) -> Result<RunSummary> {
    let psi = stream_from_vorticity(w)?;
    // Velocity one-form v = (−∂_yψ, ∂_xψ); its curl is the vorticity.
    let (vx, vy) = (-&psi.ddp(), psi.ddq());
    let curl = &vy.ddq() - &vx.ddp();
    let lap = &psi.ddq().ddq() + &psi.ddp().ddp();
    Ok(RunSummary {
        label: label.to_string(),
        shape: (w.grid().n_q(), w.grid().n_p()),
        t,
        energy: (euler_energy(w0)?, euler_energy(w)?),
        first_casimir: (w0.integrate_qp(), w.integrate_qp()),
        second_casimir: (w0.inner(w0), w.inner(w)),
        bracket_energy_rate: psi.inner(&canonical_bracket(w, &psi)).abs(),
        extraction_residual: curl.max_abs_diff(w),
        constraint_residual: lap.max_abs_diff(w),
        state_change: w.max_abs_diff(w0),
    })
}

/// Absolute drift when the initial value is round-off (a mean-free vorticity
/// has zero circulation).
fn relative_drift((a, b): (f64, f64)) -> f64 {
    if a.abs() <= 1e-12 {
        (b - a).abs()
    } else {
        (b - a).abs() / a.abs()
    }
}

/// Deterministic text table comparing a plasma run and a fluid run.
pub fn comparison_table(plasma: &RunSummary, fluid: &RunSummary) -> String {
    let mut rows: Vec<(&str, String, String)> = vec![
        ("run", plasma.label.clone(), fluid.label.clone()),
        (
            "grid",
            format!("{} x {} (q, p)", plasma.shape.0, plasma.shape.1),
            format!("{} x {} (x, y)", fluid.shape.0, fluid.shape.1),
        ),
        ("final time", format!("{:.6}", plasma.t), format!("{:.6}", fluid.t)),
        ("transported scalar", "f(q,p)".into(), "omega(x,y)".into()),
        ("stream function", "h = p^2/2m + e phi".into(), "psi".into()),
        ("elliptic constraint", "phi'' = -e (rho - <rho>)".into(), "lap psi = omega".into()),
        ("evolution", "df/dt = {h, f}".into(), "domega/dt = {omega, psi}".into()),
    ];
    let num = |x: f64| format!("{x:.3e}");
    let numeric = [
        ("energy drift (rel)", relative_drift(plasma.energy), relative_drift(fluid.energy)),
        ("first casimir drift (rel)", relative_drift(plasma.first_casimir), relative_drift(fluid.first_casimir)),
        ("second casimir drift (rel)", relative_drift(plasma.second_casimir), relative_drift(fluid.second_casimir)),
        ("bracket energy rate", plasma.bracket_energy_rate, fluid.bracket_energy_rate),
        ("extraction residual", plasma.extraction_residual, fluid.extraction_residual),
        ("constraint residual", plasma.constraint_residual, fluid.constraint_residual),
        ("max state change", plasma.state_change, fluid.state_change),
    ];
    rows.extend(numeric.iter().map(|&(k, a, b)| (k, num(a), num(b))));

    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0).max("plasma".len());
    let mut out = String::new();
    let _ = writeln!(out, "{:<w0$}  {:<w1$}  fluid", "quantity", "plasma");
    let _ = writeln!(out, "{}", "-".repeat(w0 + w1 + 4 + fluid_width(&rows)));
    for (k, a, b) in &rows {
        let _ = writeln!(out, "{k:<w0$}  {a:<w1$}  {b}");
    }
    out
}

fn fluid_width(rows: &[(&str, String, String)]) -> usize {
    rows.iter().map(|r| r.2.chars().count()).max().unwrap_or(0).max("fluid".len())
}
