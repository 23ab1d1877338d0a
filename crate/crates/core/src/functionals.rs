//! Energy functionals, the Lie-Poisson operator on momentum one-forms, the
//! density/momentum operator transformation, Casimirs and functional
//! derivative checks.

use crate::density::{apply_jlp_f, kinetic_plus, particle_hamiltonian};
use crate::error::{Error, Result};
use crate::fields::{canonical_bracket, extract_density, hamiltonian_vector_field, MomentumField, PhysParams, VectorField};
use crate::grid::{boundary_flux, PhaseField};
use crate::momentum::{h0_functional, h0_gradient};
use crate::poisson::potential_from_density;

/// `h_f = p²/2m + (e/2) φ_f`, the half-weighted energy density kernel.
fn energy_kernel(f: &PhaseField, params: &PhysParams) -> Result<PhaseField> {
    let phi = potential_from_density(f, params)?;
    Ok(kinetic_plus(&phi, 0.5 * params.e, params))
}

/// `H_LP[f] = ∫ f (p²/2m + (e/2) φ_f) dμ`
pub fn h_lp_f(f: &PhaseField, params: &PhysParams) -> Result<f64> {
    Ok(f.inner(&energy_kernel(f, params)?))
}

/// Coordinate form `∫ (−∂_p h_f Π_q + ∂_q h_f Π^p) dμ` with `h_f` built from the
/// extracted density.
pub fn h_lp_pi(pi: &MomentumField, params: &PhysParams) -> Result<f64> {
    let h = energy_kernel(&extract_density(pi), params)?;
    Ok(-h.ddp().inner(&pi.pi_q) + h.ddq().inner(&pi.pi_p))
}

/// The p-boundary flux `B(h_f, Π_q)` that closes
/// `h_lp_pi(Π) + B = h_lp_f(extract_density(Π))` on the discrete grid.
pub fn boundary_correction(pi: &MomentumField, params: &PhysParams) -> Result<f64> {
    let h = energy_kernel(&extract_density(pi), params)?;
    Ok(boundary_flux(&h, &pi.pi_q))
}

/// `−𝓛_X Π` in components.
pub fn apply_jlp_pi(pi: &MomentumField, x: &VectorField) -> MomentumField {
    let (uq, up) = (x.u.ddq(), x.u.ddp());
    let (vq, vp) = (x.v.ddq(), x.v.ddp());
    let rate_q = &(&(-&x.apply(&pi.pi_q)) - &(&pi.pi_q * &uq)) - &(&pi.pi_p * &vq);
    let rate_p = &(&(-&x.apply(&pi.pi_p)) - &(&pi.pi_q * &up)) - &(&pi.pi_p * &vp);
    MomentumField { pi_q: rate_q, pi_p: rate_p }
}

/// Jacobi-Lie bracket `[X, Y]^a = X(Y^a) − Y(X^a)`.
pub fn vector_field_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField { u: &x.apply(&y.u) - &y.apply(&x.u), v: &x.apply(&y.v) - &y.apply(&x.v) }
}

/// `∫ Π·[X_h, X_k] dμ`
pub fn lie_poisson_bracket(pi: &MomentumField, h: &PhaseField, k: &PhaseField) -> f64 {
    let w = vector_field_bracket(&hamiltonian_vector_field(h), &hamiltonian_vector_field(k));
    pi.pi_q.inner(&w.u) + pi.pi_p.inner(&w.v)
}

/// Max-norm gap between `J_LP(f) k` and `D_f J_LP(Π) D_f* k` with `f = D_f Π`.
pub fn transform_check(pi: &MomentumField, k: &PhaseField) -> f64 {
    let f = extract_density(pi);
    let direct = apply_jlp_f(&f, k);
    let lifted = apply_jlp_pi(pi, &hamiltonian_vector_field(k));
    direct.max_abs_diff(&extract_density(&lifted))
}

/// Pointwise cyclic sum `{{a,b},c} + {{b,c},a} + {{c,a},b}`.
pub fn jacobi_cyclic_sum(a: &PhaseField, b: &PhaseField, c: &PhaseField) -> PhaseField {
    let ab = canonical_bracket(&canonical_bracket(a, b), c);
    let bc = canonical_bracket(&canonical_bracket(b, c), a);
    let ca = canonical_bracket(&canonical_bracket(c, a), b);
    &(&ab + &bc) + &ca
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Casimirs {
    pub mass: f64,
    pub l2: f64,
}

pub fn casimirs(f: &PhaseField) -> Casimirs {
    Casimirs { mass: f.integrate_qp(), l2: f.inner(f) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// [`h_lp_f`]
    HlpF,
    /// [`h_lp_pi`]
    HlpPi,
    /// [`h0_functional`]
    H0,
}

/// Argument of a functional: a density or a momentum one-form.
#[derive(Clone, Debug)]
pub enum State {
    Density(PhaseField),
    Momentum(MomentumField),
}

impl From<PhaseField> for State {
    fn from(f: PhaseField) -> Self {
        State::Density(f)
    }
}

impl From<MomentumField> for State {
    fn from(pi: MomentumField) -> Self {
        State::Momentum(pi)
    }
}

impl State {
    fn shifted(&self, a: f64, dir: &State) -> Result<State> {
        match (self, dir) {
            (State::Density(f), State::Density(d)) => {
                let mut g = f.clone();
                g.axpy(a, d);
                Ok(State::Density(g))
            }
            (State::Momentum(p), State::Momentum(d)) => {
                let mut g = p.clone();
                g.axpy(a, d);
                Ok(State::Momentum(g))
            }
            _ => Err(Error::InvalidParams("state and direction are of different kinds".into())),
        }
    }

    fn pair(&self, other: &State) -> Result<f64> {
        match (self, other) {
            (State::Density(a), State::Density(b)) => Ok(a.inner(b)),
            (State::Momentum(a), State::Momentum(b)) => Ok(a.pi_q.inner(&b.pi_q) + a.pi_p.inner(&b.pi_p)),
            _ => Err(Error::InvalidParams("state and direction are of different kinds".into())),
        }
    }
}

fn expect_density(functional: Functional, s: &State) -> Result<&PhaseField> {
    match s {
        State::Density(f) => Ok(f),
        State::Momentum(_) => Err(Error::InvalidParams(format!("{functional:?} takes a density"))),
    }
}

fn expect_momentum(functional: Functional, s: &State) -> Result<&MomentumField> {
    match s {
        State::Momentum(pi) => Ok(pi),
        State::Density(_) => Err(Error::InvalidParams(format!("{functional:?} takes a momentum field"))),
    }
}

pub fn functional_value(functional: Functional, state: &State, params: &PhysParams) -> Result<f64> {
    match functional {
        Functional::HlpF => h_lp_f(expect_density(functional, state)?, params),
        Functional::HlpPi => h_lp_pi(expect_momentum(functional, state)?, params),
        Functional::H0 => h0_functional(expect_momentum(functional, state)?, params),
    }
}

/// Analytic variational derivative.
///
/// * `HlpF`: `p²/2m + e φ_f`. The full charge appears here although the
///   functional carries `e/2`: the potential is itself linear in `f`.
/// * `HlpPi`: `(−∂_p h, ∂_q h)` with the same full-charge `h`; boundary terms
///   of the p-derivative are omitted, so the match is exact only for
///   p-decaying states or spectral p.
/// * `H0`: the exact discrete gradient of [`h0_functional`].
pub fn variational_derivative(functional: Functional, state: &State, params: &PhysParams) -> Result<State> {
    match functional {
        Functional::HlpF => {
            let f = expect_density(functional, state)?;
            let phi = potential_from_density(f, params)?;
            Ok(State::Density(particle_hamiltonian(&phi, params)))
        }
        Functional::HlpPi => {
            let pi = expect_momentum(functional, state)?;
            let phi = potential_from_density(&extract_density(pi), params)?;
            let h = particle_hamiltonian(&phi, params);
            Ok(State::Momentum(MomentumField { pi_q: -&h.ddp(), pi_p: h.ddq() }))
        }
        Functional::H0 => Ok(State::Momentum(h0_gradient(expect_momentum(functional, state)?, params)?)),
    }
}

/// Directional derivative comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationCheck {
    /// `∫ (δF/δs) · dir dμ`
    pub analytic: f64,
    /// `(F(s + ε dir) − F(s − ε dir)) / 2ε`
    pub finite_difference: f64,
    /// `|fd − analytic| / |analytic|`, or the absolute gap when the analytic value is zero.
    pub relative_error: f64,
}

pub fn variational_check(
    functional: Functional,
    state: &State,
    direction: &State,
    eps: f64,
    params: &PhysParams,
) -> Result<VariationCheck> {
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::InvalidParams(format!("eps must lie in [1e-7, 1e-3], got {eps}")));
    }
    let plus = functional_value(functional, &state.shifted(eps, direction)?, params)?;
    let minus = functional_value(functional, &state.shifted(-eps, direction)?, params)?;
    let finite_difference = (plus - minus) / (2.0 * eps);
    let analytic = variational_derivative(functional, state, params)?.pair(direction)?;
    let gap = (finite_difference - analytic).abs();
    let relative_error = if analytic == 0.0 { gap } else { gap / analytic.abs() };
    Ok(VariationCheck { analytic, finite_difference, relative_error })
}

#[cfg(test)]
mod tests;
