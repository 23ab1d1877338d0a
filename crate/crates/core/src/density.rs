//! Vlasov equation in the density variable.

use ndarray::{Array2, Zip};

use crate::error::Result;
use crate::fields::PhysParams;
use crate::grid::{ConfigField, PhaseField};
use crate::integrate::{cfl_limit, rk4_step, warn_if_unstable};
use crate::poisson::potential_from_density;

/// `p²/2m + c φ(q)`; `c = e` gives the single-particle Hamiltonian, `c = e/2`
/// the energy density weight.
pub(crate) fn kinetic_plus(phi: &ConfigField, c: f64, params: &PhysParams) -> PhaseField {
    let grid = phi.grid();
    let p = grid.p();
    let ph = phi.values();
    let inv2m = 0.5 / params.m;
    let v = Array2::from_shape_fn((grid.n_q(), grid.n_p()), |(i, j)| p[j] * p[j] * inv2m + c * ph[i]);
    PhaseField::from_array(grid, v).expect("shape")
}

/// Single-particle Hamiltonian `h = p²/2m + e φ`.
pub fn particle_hamiltonian(phi: &ConfigField, params: &PhysParams) -> PhaseField {
    kinetic_plus(phi, params.e, params)
}

/// `∂_t f = −(p/m) ∂_q f + e ∂_qφ ∂_p f` with the self-consistent potential.
pub fn vlasov_rhs(f: &PhaseField, params: &PhysParams) -> Result<PhaseField> {
    let phi = potential_from_density(f, params)?;
    Ok(advect(f, &phi.ddq(), params))
}

fn advect(f: &PhaseField, dphi: &ConfigField, params: &PhysParams) -> PhaseField {
    let grid = f.grid();
    let p = grid.p();
    let dphi = dphi.values();
    let (fq, fp) = (f.ddq(), f.ddp());
    let inv_m = 1.0 / params.m;
    let e = params.e;
    let mut out = Array2::zeros(f.values().dim());
    Zip::indexed(&mut out).and(fq.values()).and(fp.values()).for_each(|(i, j), o, a, b| {
        *o = -p[j] * inv_m * a + e * dphi[i] * b;
    });
    PhaseField::from_array(grid, out).expect("shape")
}

/// `J(f) g = ∂_p f ∂_q g − ∂_q f ∂_p g`
pub fn apply_jlp_f(f: &PhaseField, g: &PhaseField) -> PhaseField {
    &(&f.ddp() * &g.ddq()) - &(&f.ddq() * &g.ddp())
}

/// Stability bound for the current density state.
pub fn density_cfl(f: &PhaseField, params: &PhysParams) -> Result<f64> {
    let e_field = potential_from_density(f, params)?.ddq().max_abs();
    Ok(cfl_limit(f.grid(), e_field, params))
}

/// One RK4 step; logs a warning when `dt` exceeds the advisory bound.
pub fn step_rk4_density(f: &PhaseField, dt: f64, params: &PhysParams) -> Result<PhaseField> {
    warn_if_unstable(dt, density_cfl(f, params)?);
    rk4_step(f, dt, |s| vlasov_rhs(s, params))
}
