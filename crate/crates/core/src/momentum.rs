//! Momentum one-form dynamics: the momentum-Vlasov flow, the canonical flow of
//! the quadratic Hamiltonian H₀, initialization from a density, and the
//! Euler-Lagrange residual.
//!
//! Throughout, `X_h = u ∂_q + v ∂_p` with `u = p/m`, `v = −e ∂_qφ` and `φ` the
//! self-consistent potential of the extracted density.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use ndarray::{Array2, Zip};

use crate::error::{Error, Result};
use crate::fields::{extract_density, MomentumField, PhysParams};
use crate::grid::{ConfigField, PhaseField};
use crate::integrate::{cfl_limit, rk4_step, warn_if_unstable};
use crate::poisson::{greens_kernel, potential_from_density};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    MomentumVlasov,
    CanonicalH0,
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flow::MomentumVlasov => "momentum",
            Flow::CanonicalH0 => "canonical",
        })
    }
}

impl FromStr for Flow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "momentum" | "momentum_vlasov" => Ok(Flow::MomentumVlasov),
            "canonical" | "canonical_h0" => Ok(Flow::CanonicalH0),
            other => Err(Error::InvalidParams(format!("unknown flow '{other}'"))),
        }
    }
}

/// Derivatives and potential shared by the rate functions.
struct Kinematics {
    dphi: ConfigField,
    d2phi: ConfigField,
    qq: PhaseField,
    qp: PhaseField,
    pq: PhaseField,
    pp: PhaseField,
}

impl Kinematics {
    fn new(pi: &MomentumField, params: &PhysParams) -> Result<Self> {
        let (qq, qp) = (pi.pi_q.ddq(), pi.pi_q.ddp());
        let (pq, pp) = (pi.pi_p.ddq(), pi.pi_p.ddp());
        let f = &qp - &pq;
        let phi = potential_from_density(&f, params)?;
        let dphi = phi.ddq();
        let d2phi = dphi.ddq();
        Ok(Self { dphi, d2phi, qq, qp, pq, pp })
    }

    /// `X_h a` from precomputed `∂_q a`, `∂_p a`.
    fn x_h(&self, aq: &PhaseField, ap: &PhaseField, params: &PhysParams) -> PhaseField {
        let grid = aq.grid();
        let p = grid.p();
        let dphi = self.dphi.values();
        let (inv_m, e) = (1.0 / params.m, params.e);
        let mut out = Array2::zeros(aq.values().dim());
        Zip::indexed(&mut out).and(aq.values()).and(ap.values()).for_each(|(i, j), o, a, b| {
            *o = p[j] * inv_m * a - e * dphi[i] * b;
        });
        PhaseField::from_array(grid, out).expect("shape")
    }
}

fn x_h_of(a: &PhaseField, dphi: &ConfigField, params: &PhysParams) -> PhaseField {
    let u = a.grid().p().iter().map(|p| p / params.m).collect::<Vec<_>>();
    &a.ddq().mul_p(&u) - &a.ddp().mul_q(&dphi.scale(params.e))
}

/// `Π̇_q = −X_h Π_q + e φ'' Π^p`, `Π̇^p = −X_h Π^p − Π_q / m`.
pub fn momentum_vlasov_rhs(pi: &MomentumField, params: &PhysParams) -> Result<MomentumField> {
    let k = Kinematics::new(pi, params)?;
    momentum_rate(pi, &k, params)
}

fn momentum_rate(pi: &MomentumField, k: &Kinematics, params: &PhysParams) -> Result<MomentumField> {
    let grid = pi.grid();
    let p = grid.p();
    let (dphi, d2phi) = (k.dphi.values(), k.d2phi.values());
    let (inv_m, e) = (1.0 / params.m, params.e);

    let mut rq = Array2::zeros(pi.pi_q.values().dim());
    Zip::indexed(&mut rq).and(k.qq.values()).and(k.qp.values()).and(pi.pi_p.values()).for_each(|(i, j), o, a, b, pp| {
        *o = -(p[j] * inv_m * a - e * dphi[i] * b) + e * d2phi[i] * pp;
    });
    let mut rp = Array2::zeros(rq.dim());
    Zip::indexed(&mut rp).and(k.pq.values()).and(k.pp.values()).and(pi.pi_q.values()).for_each(|(i, j), o, a, b, pq| {
        *o = -(p[j] * inv_m * a - e * dphi[i] * b) - pq * inv_m;
    });
    let rate = MomentumField::new(PhaseField::from_array(grid, rq)?, PhaseField::from_array(grid, rp)?)?;
    if !rate.is_finite() {
        return Err(Error::NonFinite { what: "momentum rate".into(), step: 0 });
    }
    Ok(rate)
}

/// Gradient potential `Φ = Φ₁ + Φ₂` of the canonical flow, built from the
/// Green's kernel and its source-point derivatives:
/// `Φ₁(q) = e² ∫ ∂_q́K(q|q́) c(q́) dq́` with `c = −∫ Π_q ∂_pΠ^p dp`
/// (equal to `∫ ∂_pΠ_q Π^p dp` up to the p-boundary flux), and
/// `Φ₂(q) = (e²/2) ∫ ∂²_q́K(q|q́) d(q́) dq́` with `d = ∫ (Π^p)² dp`.
///
/// With this choice `∂_qΦ` is the exact discrete gradient of H₀ through the
/// potential's dependence on `Π^p`.
pub fn phi_gradient_term(pi: &MomentumField, params: &PhysParams) -> Result<ConfigField> {
    let grid = pi.grid();
    if params.e == 0.0 {
        return Ok(ConfigField::zeros(grid));
    }
    let c = (&pi.pi_q * &pi.pi_p.ddp()).integrate_p().scale(-1.0);
    let d = (&pi.pi_p * &pi.pi_p).integrate_p();
    let kernel = greens_kernel(grid);
    let e2 = params.e * params.e;
    let phi1 = kernel.integrate_against(&kernel.source_derivative(1), c.values());
    let phi2 = kernel.integrate_against(&kernel.source_derivative(2), d.values());
    let total = phi1 * e2 + phi2 * (0.5 * e2);
    let out = ConfigField::from_array(grid, total)?;
    if !out.is_finite() {
        return Err(Error::NonFinite { what: "gradient term".into(), step: 0 });
    }
    Ok(out)
}

/// Canonical flow of H₀: the momentum-Vlasov rate plus `(∂_qΦ, 0)`.
pub fn canonical_h0_rhs(pi: &MomentumField, params: &PhysParams) -> Result<MomentumField> {
    let mut rate = momentum_vlasov_rhs(pi, params)?;
    let dphi_big = phi_gradient_term(pi, params)?.ddq();
    rate.pi_q = &rate.pi_q + &PhaseField::from_config(&dphi_big);
    Ok(rate)
}

pub fn rate(pi: &MomentumField, params: &PhysParams, flow: Flow) -> Result<MomentumField> {
    match flow {
        Flow::MomentumVlasov => momentum_vlasov_rhs(pi, params),
        Flow::CanonicalH0 => canonical_h0_rhs(pi, params),
    }
}

fn h0_density(pi: &MomentumField, k: &Kinematics, params: &PhysParams) -> PhaseField {
    let w = k.x_h(&k.pq, &k.pp, params);
    let inv2m = 0.5 / params.m;
    let half_e = 0.5 * params.e;
    let d2 = k.d2phi.values();
    let mut out = Array2::zeros(w.values().dim());
    Zip::indexed(&mut out).and(w.values()).and(pi.pi_q.values()).and(pi.pi_p.values()).for_each(|(i, _), o, w, a, b| {
        *o = a * w + a * a * inv2m + half_e * d2[i] * b * b;
    });
    PhaseField::from_array(pi.grid(), out).expect("shape")
}

/// `H₀ = ∫ (Π_q X_h(Π^p) + Π_q²/2m + (e/2) φ'' (Π^p)²) dμ`
pub fn h0_functional(pi: &MomentumField, params: &PhysParams) -> Result<f64> {
    let k = Kinematics::new(pi, params)?;
    Ok(h0_density(pi, &k, params).integrate_qp())
}

/// Exact discrete gradient `(δH₀/δΠ_q, δH₀/δΠ^p)` of [`h0_functional`] under
/// the quadrature inner product.
///
/// Away from the p-ends it reduces to `(X_h Π^p + Π_q/m, −X_h Π_q + eφ''Π^p + ∂_qΦ)`;
/// the remaining terms live on the p-boundary rows where the finite
/// difference derivative fails to be skew.
pub fn h0_gradient(pi: &MomentumField, params: &PhysParams) -> Result<MomentumField> {
    let (interior, boundary) = h0_gradient_parts(pi, params)?;
    let mut g = interior;
    g.axpy(1.0, &boundary);
    Ok(g)
}

fn h0_gradient_parts(pi: &MomentumField, params: &PhysParams) -> Result<(MomentumField, MomentumField)> {
    let k = Kinematics::new(pi, params)?;
    let grid = pi.grid();
    let rate = momentum_rate(pi, &k, params)?;
    let big_phi = phi_gradient_term(pi, params)?;
    let interior = MomentumField {
        pi_q: -&rate.pi_p,
        pi_p: &rate.pi_q + &PhaseField::from_config(&big_phi.ddq()),
    };
    let ones = PhaseField::constant(grid, 1.0).boundary_form_p();
    let boundary = MomentumField {
        pi_q: ones.mul_q(&big_phi),
        pi_p: pi.pi_q.boundary_form_p().mul_q(&k.dphi.scale(-params.e)),
    };
    Ok((interior, boundary))
}

/// Energy balance of the canonical flow at one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H0Balance {
    pub h0: f64,
    /// `dH₀/dt` along the canonical flow, from the exact discrete gradient.
    pub rate: f64,
    /// The integrated divergence term: the p-boundary flux carried by the
    /// non-skew corner rows of the p-derivative.
    pub boundary_flux: f64,
}

pub fn h0_balance(pi: &MomentumField, params: &PhysParams) -> Result<H0Balance> {
    let h0 = h0_functional(pi, params)?;
    let (interior, boundary) = h0_gradient_parts(pi, params)?;
    let r = MomentumField { pi_q: interior.pi_p.clone(), pi_p: -&interior.pi_q };
    let mut full = interior;
    full.axpy(1.0, &boundary);
    let rate = full.pi_q.inner(&r.pi_q) + full.pi_p.inner(&r.pi_p);
    let boundary_flux = boundary.pi_q.inner(&r.pi_q) + boundary.pi_p.inner(&r.pi_p);
    Ok(H0Balance { h0, rate, boundary_flux })
}

/// Pointwise residual of the Eulerian energy law along the momentum-Vlasov flow:
/// `∂_t𝓗₀ + ∇·(F X_h) − (e/2)[(Π^p)² ∂_tφ'' − 2 Π_q ∂_pΠ^p ∂_tφ']`
/// with `F = Π_q (X_h Π^p + Π_q/m)`. Zero in the continuum; converges at the
/// spatial order of the operators.
pub fn h0_eulerian_residual(pi: &MomentumField, params: &PhysParams) -> Result<PhaseField> {
    let k = Kinematics::new(pi, params)?;
    let r = momentum_rate(pi, &k, params)?;
    let inv_m = 1.0 / params.m;
    let w = k.x_h(&k.pq, &k.pp, params);
    let xr = k.x_h(&r.pi_p.ddq(), &r.pi_p.ddp(), params);

    // Terms of ∂_t𝓗₀ at frozen potential; the potential-rate terms cancel the source exactly.
    let mut dh = &r.pi_q * &w;
    dh = &dh + &(&pi.pi_q * &xr);
    dh = &dh + &(&pi.pi_q * &r.pi_q).scale(inv_m);
    dh = &dh + &(&pi.pi_p * &r.pi_p).mul_q(&k.d2phi.scale(params.e));

    let flux = &pi.pi_q * &(&w + &pi.pi_q.scale(inv_m));
    let u: Vec<f64> = pi.grid().p().iter().map(|p| p * inv_m).collect();
    let div = &flux.mul_p(&u).ddq() + &flux.mul_q(&k.dphi.scale(-params.e)).ddp();
    Ok(&dh + &div)
}

/// Construct `Π` with `extract_density(Π) = f0`.
///
/// `f0` is split into its q-mean profile `g(p)` and a q-mean-free remainder
/// `δf`. Then `Π_q = V(p)` with `∂_p V = g` solved exactly for the discrete
/// operator (least squares, `V(−p_max) = 0`), and `Π^p = −∂_q⁻¹ δf`.
pub fn init_momentum_from_density(f0: &PhaseField) -> Result<MomentumField> {
    const LIMIT: f64 = 1e-6;
    let grid = f0.grid();
    if !f0.is_finite() {
        return Err(Error::NonFinite { what: "initial density".into(), step: 0 });
    }
    let g = f0.q_mean();
    let profile = PhaseField::from_p_profile(grid, &g);
    let delta = f0 - &profile;

    let v = solve_profile(&grid.p_derivative_matrix(), &g, grid.dp());
    let pi = MomentumField { pi_q: PhaseField::from_p_profile(grid, &v), pi_p: -delta.antiderivative_q() };

    let residual = extract_density(&pi).max_abs_diff(f0);
    if !(residual <= LIMIT) {
        return Err(Error::Reconstruction { residual, limit: LIMIT });
    }
    Ok(pi)
}

/// Least-squares solution of `D V = g`, `V_0 = 0`.
fn solve_profile(d: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len();
    let mut a = DMatrix::<f64>::zeros(n + 1, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = d[i * n + j];
        }
    }
    // Pin the free constant; weight matched to the derivative rows.
    a[(n, 0)] = 1.0 / h;
    let mut b = DVector::<f64>::zeros(n + 1);
    for i in 0..n {
        b[i] = g[i];
    }
    let qr = a.qr();
    let rhs = qr.q().transpose() * b;
    let v = qr.r().solve_upper_triangular(&rhs).unwrap_or_else(|| DVector::zeros(n));
    v.iter().copied().collect()
}

/// Residual of the second-order-in-time equation for `Π^p` obtained by
/// eliminating `Π_q` from the momentum-Vlasov flow:
/// `Π̈ + 2 X_h Π̇ + X_h² Π + (e/m) φ'' Π + (∂_t X_h) Π`,
/// with centered differences in time. The last term, `−e ∂_tφ' ∂_p Π`, is
/// needed whenever the potential evolves.
pub fn el_residual(
    prev: &MomentumField,
    now: &MomentumField,
    next: &MomentumField,
    dt: f64,
    params: &PhysParams,
) -> Result<PhaseField> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    let phi = |pi: &MomentumField| potential_from_density(&extract_density(pi), params);
    let (phi_prev, phi_now, phi_next) = (phi(prev)?, phi(now)?, phi(next)?);
    let dphi = phi_now.ddq();
    let d2phi = dphi.ddq();
    let dphi_dot = (&phi_next - &phi_prev).scale(0.5 / dt).ddq();

    let a = &now.pi_p;
    let acc = (&(&next.pi_p - &a.scale(2.0)) + &prev.pi_p).scale(1.0 / (dt * dt));
    let vel = (&next.pi_p - &prev.pi_p).scale(0.5 / dt);

    let mut res = acc;
    res = &res + &x_h_of(&vel, &dphi, params).scale(2.0);
    res = &res + &x_h_of(&x_h_of(a, &dphi, params), &dphi, params);
    res = &res + &a.mul_q(&d2phi.scale(params.e / params.m));
    res = &res - &a.ddp().mul_q(&dphi_dot.scale(params.e));
    Ok(res)
}

/// Stability bound for a momentum state (uses the extracted density's field).
pub fn momentum_cfl(pi: &MomentumField, params: &PhysParams) -> Result<f64> {
    let e_field = potential_from_density(&extract_density(pi), params)?.ddq().max_abs();
    Ok(cfl_limit(pi.grid(), e_field, params))
}

pub fn step_rk4_momentum(pi: &MomentumField, dt: f64, params: &PhysParams, flow: Flow) -> Result<MomentumField> {
    warn_if_unstable(dt, momentum_cfl(pi, params)?);
    rk4_step(pi, dt, |s| rate(s, params, flow))
}

/// Density of a momentum rate, `∂_p Π̇_q − ∂_q Π̇^p`.
pub fn rate_density(rate: &MomentumField) -> PhaseField {
    extract_density(rate)
}
