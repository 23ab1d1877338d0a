use super::*;
use crate::density::step_rk4_density;
use crate::fields::gauge_shift;
use crate::grid::{Grid, GridSpec, PScheme};
use crate::momentum::{init_momentum_from_density, momentum_vlasov_rhs};
use crate::scenarios::{landau, maxwellian, uniform};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

fn grid(nq: usize, np: usize, lq: f64, pmax: f64, s: PScheme) -> Arc<Grid> {
    GridSpec::new(nq, np, lq, pmax, s).unwrap().build().unwrap()
}

/// p-decaying synthetic one-form with a non-trivial density.
fn decaying_pi(g: &Arc<Grid>) -> MomentumField {
    MomentumField::new(
        PhaseField::from_fn(g, |q, p| (1.0 + 0.4 * (0.5 * q).cos()) * (-p * p / 2.0).exp() * (1.0 + 0.3 * p)),
        PhaseField::from_fn(g, |q, p| (0.3 * (0.5 * q).sin() + 0.2 * q.cos() * p) * (-p * p / 3.0).exp()),
    )
    .unwrap()
}

fn noise(g: &Arc<Grid>, seed: u64) -> PhaseField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = ndarray::Array2::from_shape_simple_fn((g.n_q(), g.n_p()), || rng.gen_range(-1.0..1.0));
    PhaseField::from_array(g, v).unwrap()
}

#[test]
fn h_lp_f_examples() {
    let g = grid(16, 256, 2.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams::default();
    assert_eq!(h_lp_f(&PhaseField::zeros(&g), &params).unwrap(), 0.0);

    // ∫p²M dp = 1, so H = 2π·½.
    let u = uniform(&g);
    assert!((h_lp_f(&u, &params).unwrap() - PI).abs() < 1e-8);

    let f = landau(&g, 0.3, 1.0);
    let neutral = PhysParams { e: 0.0, ..params };
    let kinetic = f.inner(&PhaseField::from_fn(&g, |_, p| p * p / 2.0));
    assert!((h_lp_f(&f, &neutral).unwrap() - kinetic).abs() < 1e-13 * kinetic);
    assert!(h_lp_f(&f, &params).unwrap() > kinetic);
}

#[test]
fn h_lp_pi_matches_density_form() {
    let params = PhysParams { e: 0.7, m: 1.3, neutralize: true };
    let g = grid(32, 128, 4.0 * PI, 8.0, PScheme::Fd4);
    assert_eq!(h_lp_pi(&MomentumField::zeros(&g), &params).unwrap(), 0.0);

    let pi = decaying_pi(&g);
    let a = h_lp_pi(&pi, &params).unwrap();
    let b = h_lp_f(&extract_density(&pi), &params).unwrap();
    assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    assert!(boundary_correction(&pi, &params).unwrap().abs() < 1e-8);

    // Physical state: Π_q carries the cumulative mass up to +p_max.
    let pi = init_momentum_from_density(&uniform(&g)).unwrap();
    let corr = boundary_correction(&pi, &params).unwrap();
    let a = h_lp_pi(&pi, &params).unwrap();
    let b = h_lp_f(&extract_density(&pi), &params).unwrap();
    assert!(corr.abs() > 1.0);
    assert!((a + corr - b).abs() <= 1e-8, "{} vs {b}", a + corr);
}

#[test]
fn jlp_pi_reproduces_momentum_flow() {
    let g = grid(64, 128, 4.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams { e: 0.9, m: 1.2, neutralize: true };
    let pi = init_momentum_from_density(&landau(&g, 0.1, 0.5)).unwrap();
    let phi = potential_from_density(&extract_density(&pi), &params).unwrap();
    let b = momentum_vlasov_rhs(&pi, &params).unwrap();
    // X_h = (p/m, −e ∂_qφ) written out.
    let x = VectorField {
        u: PhaseField::from_fn(&g, |_, p| p / params.m),
        v: PhaseField::from_config(&phi.ddq().scale(-params.e)),
    };
    let a = apply_jlp_pi(&pi, &x);
    assert!(a.max_abs_diff(&b) <= 1e-12, "{}", a.max_abs_diff(&b));
    // Through the stencil, ∂_p(p²/2m) adds round-off of order p_max² / Δp · ε.
    let x = hamiltonian_vector_field(&particle_hamiltonian(&phi, &params));
    assert!(apply_jlp_pi(&pi, &x).max_abs_diff(&b) <= 1e-10);

    assert_eq!(apply_jlp_pi(&pi, &VectorField::zeros(&g)).max_abs(), 0.0);
    assert_eq!(apply_jlp_pi(&MomentumField::zeros(&g), &x).max_abs(), 0.0);
}

#[test]
fn bracket_examples() {
    let g = grid(32, 128, 4.0 * PI, 8.0, PScheme::Spectral);
    let pi = decaying_pi(&g);
    let h = PhaseField::from_fn(&g, |q, p| ((0.5 * q).cos() + 0.5 * p) * (-p * p / 3.0).exp());
    let k = PhaseField::from_fn(&g, |q, p| ((0.5 * q).sin() + p * q.cos()) * (-p * p / 3.0).exp());
    assert_eq!(lie_poisson_bracket(&pi, &h, &h), 0.0);
    let hk = lie_poisson_bracket(&pi, &h, &k);
    assert!((hk + lie_poisson_bracket(&pi, &k, &h)).abs() <= 1e-12);
    assert!(hk.abs() > 1e-3);

    // Integration by parts against the extracted density.
    let f = extract_density(&pi);
    let oracle = f.inner(&canonical_bracket(&h, &k));
    assert!((hk - oracle).abs() <= 1e-8, "{hk} vs {oracle}");
}

#[test]
fn transform_examples() {
    let g = grid(32, 160, 4.0 * PI, 10.0, PScheme::Spectral);
    let pi = decaying_pi(&g);
    assert!(transform_check(&pi, &PhaseField::constant(&g, 3.0)) < 1e-14);

    let k = PhaseField::from_fn(&g, |q, p| ((0.5 * q).sin() + p * q.cos()) * (-p * p / 3.0).exp());
    let scale = apply_jlp_f(&extract_density(&pi), &k).max_abs();
    assert!(scale > 1e-2);
    assert!(transform_check(&pi, &k) <= 1e-8, "{}", transform_check(&pi, &k));

    let chi = PhaseField::from_fn(&g, |q, p| q.sin() * (-p * p).exp());
    let gauge = gauge_shift(&MomentumField::zeros(&g), &chi);
    assert!(transform_check(&gauge, &k) <= 1e-10);
}

#[test]
fn transform_converges_at_stencil_order() {
    let err = |np: usize| {
        let g = grid(32, np, 4.0 * PI, 8.0, PScheme::Fd4);
        let k = PhaseField::from_fn(&g, |q, p| ((0.5 * q).sin() + p * (0.5 * q).cos()) * (-p * p / 4.0).exp());
        transform_check(&decaying_pi(&g), &k)
    };
    let (a, b) = (err(128), err(256));
    assert!((a / b).log2() > 3.5, "order {}", (a / b).log2());
}

#[test]
fn casimir_examples() {
    let g = grid(16, 32, 2.0 * PI, PI, PScheme::Fd4);
    assert_eq!(casimirs(&PhaseField::zeros(&g)), Casimirs { mass: 0.0, l2: 0.0 });
    let c = casimirs(&PhaseField::constant(&g, 1.0));
    assert!((c.mass - 4.0 * PI * PI).abs() < 1e-12);
    assert!((c.l2 - 4.0 * PI * PI).abs() < 1e-12);
}

#[test]
fn casimirs_hold_over_a_short_landau_run() {
    let g = grid(64, 128, 4.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams::default();
    let mut f = landau(&g, 0.05, 0.5);
    let c0 = casimirs(&f);
    for _ in 0..256 {
        f = step_rk4_density(&f, 1.0 / 128.0, &params).unwrap();
    }
    let c = casimirs(&f);
    assert!((c.mass - c0.mass).abs() <= 1e-10 * c0.mass);
    assert!((c.l2 - c0.l2).abs() <= 1e-4 * c0.l2);
}

#[test]
fn density_energy_derivative_needs_full_charge() {
    let g = grid(32, 128, 4.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams { e: 1.4, m: 0.8, neutralize: true };
    let f = State::from(landau(&g, 0.2, 0.5));
    let dir = State::from(noise(&g, 7));
    let c = variational_check(Functional::HlpF, &f, &dir, 1e-4, &params).unwrap();
    assert!(c.relative_error <= 1e-6, "{c:?}");

    // The half-charge kernel of the integrand is not the derivative.
    let State::Density(fd) = &f else { unreachable!() };
    let State::Density(dd) = &dir else { unreachable!() };
    let half = energy_kernel(fd, &params).unwrap().inner(dd);
    assert!((half - c.finite_difference).abs() > 1e3 * (c.analytic - c.finite_difference).abs());
}

#[test]
fn momentum_energy_derivative() {
    let g = grid(32, 64, 4.0 * PI, 6.0, PScheme::Spectral);
    let params = PhysParams { e: 0.8, ..Default::default() };
    let pi = State::from(decaying_pi(&g));
    let dir = State::from(MomentumField::new(noise(&g, 1), noise(&g, 2)).unwrap());
    let c = variational_check(Functional::HlpPi, &pi, &dir, 1e-4, &params).unwrap();
    assert!(c.relative_error <= 1e-6, "{c:?}");
}

#[test]
fn h0_derivative_and_order() {
    let g = grid(32, 128, 4.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams::default();
    let pi = State::from(init_momentum_from_density(&landau(&g, 0.1, 0.5)).unwrap());
    let dir = State::from(decaying_pi(&g));
    let a = variational_check(Functional::H0, &pi, &dir, 1e-3, &params).unwrap();
    let b = variational_check(Functional::H0, &pi, &dir, 5e-4, &params).unwrap();
    assert!(a.relative_error <= 1e-6, "{a:?}");
    let order = (a.relative_error / b.relative_error).log2();
    assert!(order >= 1.8, "order {order}");
}

#[test]
fn variational_edge_cases() {
    let g = grid(16, 64, 4.0 * PI, 8.0, PScheme::Fd4);
    let params = PhysParams::default();
    let f = State::from(landau(&g, 0.1, 0.5));
    let zero = State::from(PhaseField::zeros(&g));
    let c = variational_check(Functional::HlpF, &f, &zero, 1e-4, &params).unwrap();
    assert_eq!((c.analytic, c.finite_difference, c.relative_error), (0.0, 0.0, 0.0));

    assert!(variational_check(Functional::HlpF, &f, &zero, 1e-2, &params).is_err());
    assert!(variational_check(Functional::HlpF, &f, &zero, 1e-9, &params).is_err());
    let m = State::from(MomentumField::zeros(&g));
    assert!(variational_check(Functional::HlpF, &f, &m, 1e-4, &params).is_err());
    assert!(variational_check(Functional::H0, &f, &zero, 1e-4, &params).is_err());
}

/// Trigonometric polynomial with wavenumbers up to 2 on `[0,2π) × [−π,π)`.
fn band_limited(g: &Arc<Grid>, c: &[f64]) -> PhaseField {
    PhaseField::from_fn(g, |q, p| {
        c[0] * q.cos() * p.sin()
            + c[1] * (2.0 * q).sin()
            + c[2] * (q + p).cos()
            + c[3] * (2.0 * p).cos() * q.sin()
            + c[4] * (q - 2.0 * p).sin()
    })
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_identity_on_band_limited_triples(a in coeffs(), b in coeffs(), c in coeffs()) {
        let g = grid(24, 24, 2.0 * PI, PI, PScheme::Spectral);
        let (a, b, c) = (band_limited(&g, &a), band_limited(&g, &b), band_limited(&g, &c));
        prop_assert!(jacobi_cyclic_sum(&a, &b, &c).max_abs() <= 1e-8);
    }

    #[test]
    fn lie_poisson_bracket_is_antisymmetric(a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs()) {
        let g = grid(16, 16, 2.0 * PI, PI, PScheme::Spectral);
        let pi = MomentumField::new(band_limited(&g, &a), band_limited(&g, &b)).unwrap();
        let (h, k) = (band_limited(&g, &c), band_limited(&g, &d));
        prop_assert_eq!(lie_poisson_bracket(&pi, &h, &h), 0.0);
        prop_assert!((lie_poisson_bracket(&pi, &h, &k) + lie_poisson_bracket(&pi, &k, &h)).abs() <= 1e-12);
    }

    #[test]
    fn boundary_corrected_identity_holds_on_any_state(seed in 0u64..1000) {
        let g = grid(16, 32, 4.0 * PI, 8.0, PScheme::Fd4);
        let params = PhysParams::default();
        let f = noise(&g, seed);
        let pi = MomentumField::new(f.map(|x| x + maxwellian(0.0, 0.0, 1.0)), noise(&g, seed + 1)).unwrap();
        let lhs = h_lp_pi(&pi, &params).unwrap() + boundary_correction(&pi, &params).unwrap();
        let rhs = h_lp_f(&extract_density(&pi), &params).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }
}
