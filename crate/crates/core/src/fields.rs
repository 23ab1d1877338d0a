//! Momentum one-forms, density extraction, Clebsch pairs, gauge shifts and the
//! canonical bracket.
//!
//! Bracket convention: `{a, b} = ∂_q a ∂_p b − ∂_p a ∂_q b`. With it the
//! density of `α dβ` is `{β, α}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Grid, PhaseField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysParams {
    pub e: f64,
    pub m: f64,
    /// Subtract the q-mean charge before the Poisson solve.
    pub neutralize: bool,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { e: 1.0, m: 1.0, neutralize: true }
    }
}

impl PhysParams {
    pub fn new(e: f64, m: f64, neutralize: bool) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParams(format!("mass must be positive, got {m}")));
        }
        if !e.is_finite() {
            return Err(Error::InvalidParams(format!("charge must be finite, got {e}")));
        }
        Ok(Self { e, m, neutralize })
    }
}

/// Components `(Π_q, Π^p)` of a momentum one-form `Π_q dq + Π^p dp`.
#[derive(Clone, Debug)]
pub struct MomentumField {
    pub pi_q: PhaseField,
    pub pi_p: PhaseField,
}

impl MomentumField {
    pub fn new(pi_q: PhaseField, pi_p: PhaseField) -> Result<Self> {
        if pi_q.grid().spec() != pi_p.grid().spec() {
            return Err(Error::InvalidGrid("momentum components on different grids".into()));
        }
        Ok(Self { pi_q, pi_p })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { pi_q: PhaseField::zeros(grid), pi_p: PhaseField::zeros(grid) }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.pi_q.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.pi_q.is_finite() && self.pi_p.is_finite()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { pi_q: self.pi_q.scale(a), pi_p: self.pi_p.scale(a) }
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        self.pi_q.axpy(a, &x.pi_q);
        self.pi_p.axpy(a, &x.pi_p);
    }

    pub fn max_abs(&self) -> f64 {
        self.pi_q.max_abs().max(self.pi_p.max_abs())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.pi_q.max_abs_diff(&other.pi_q).max(self.pi_p.max_abs_diff(&other.pi_p))
    }
}

#[derive(Clone, Debug)]
pub struct ClebschPair {
    pub alpha: PhaseField,
    pub beta: PhaseField,
}

impl ClebschPair {
    pub fn new(alpha: PhaseField, beta: PhaseField) -> Result<Self> {
        if alpha.grid().spec() != beta.grid().spec() {
            return Err(Error::InvalidGrid("Clebsch potentials on different grids".into()));
        }
        Ok(Self { alpha, beta })
    }
}

/// A phase-space vector field `u ∂_q + v ∂_p`.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub u: PhaseField,
    pub v: PhaseField,
}

impl VectorField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { u: PhaseField::zeros(grid), v: PhaseField::zeros(grid) }
    }

    /// Directional derivative `u ∂_q a + v ∂_p a`.
    pub fn apply(&self, a: &PhaseField) -> PhaseField {
        &(&self.u * &a.ddq()) + &(&self.v * &a.ddp())
    }
}

/// `f = ∂_p Π_q − ∂_q Π^p`
pub fn extract_density(pi: &MomentumField) -> PhaseField {
    &pi.pi_q.ddp() - &pi.pi_p.ddq()
}

/// `Π = α dβ`
pub fn clebsch_momentum(pair: &ClebschPair) -> MomentumField {
    MomentumField { pi_q: &pair.alpha * &pair.beta.ddq(), pi_p: &pair.alpha * &pair.beta.ddp() }
}

pub fn canonical_bracket(a: &PhaseField, b: &PhaseField) -> PhaseField {
    &(&a.ddq() * &b.ddp()) - &(&a.ddp() * &b.ddq())
}

/// `Π + dχ`
pub fn gauge_shift(pi: &MomentumField, chi: &PhaseField) -> MomentumField {
    MomentumField { pi_q: &pi.pi_q + &chi.ddq(), pi_p: &pi.pi_p + &chi.ddp() }
}

/// `X_h = (∂_p h, −∂_q h)`
pub fn hamiltonian_vector_field(h: &PhaseField) -> VectorField {
    VectorField { u: h.ddp(), v: -h.ddq() }
}

/// Smallest grid value; reported as a positivity diagnostic, never enforced.
pub fn min_density(f: &PhaseField) -> f64 {
    f.min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, PScheme};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid(nq: usize, np: usize, pmax: f64, s: PScheme) -> Arc<Grid> {
        GridSpec::new(nq, np, 2.0 * PI, pmax, s).unwrap().build().unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(PhysParams::new(1.0, 0.0, true).is_err());
        assert!(PhysParams::new(f64::NAN, 1.0, true).is_err());
        assert_eq!(PhysParams::default(), PhysParams::new(1.0, 1.0, true).unwrap());
    }

    #[test]
    fn extraction_examples() {
        let g = grid(32, 128, 6.0, PScheme::Fd4);
        // V(p) = ∫ Gaussian → f = Gaussian.
        let v = PhaseField::from_fn(&g, |_, p| gauss_integral(p));
        let f = extract_density(&MomentumField::new(v, PhaseField::zeros(&g)).unwrap());
        let exact = PhaseField::from_fn(&g, |_, p| (-p * p).exp());
        assert!(f.max_abs_diff(&exact) < 1e-4);

        let chi = PhaseField::from_fn(&g, |q, p| q.sin() * (-p * p).exp() + (2.0 * q).cos() * p);
        let exact_form = gauge_shift(&MomentumField::zeros(&g), &chi);
        assert!(extract_density(&exact_form).max_abs() < 1e-12 * (1.0 + exact_form.max_abs()));

        let pi = MomentumField::new(PhaseField::zeros(&g), PhaseField::from_fn(&g, |q, p| -q.sin() * (-p * p).exp())).unwrap();
        let exact = PhaseField::from_fn(&g, |q, p| q.cos() * (-p * p).exp());
        assert!(extract_density(&pi).max_abs_diff(&exact) < 1e-13);
    }

    /// `∫_0^x e^{-t²} dt` by composite Simpson.
    fn gauss_integral(x: f64) -> f64 {
        let n = 4000;
        let h = x / n as f64;
        let mut s = 1.0 + (-x * x).exp();
        for k in 1..n {
            let t = k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * (-t * t).exp();
        }
        s * h / 3.0
    }

    #[test]
    fn clebsch_examples() {
        let g = grid(32, 96, 6.0, PScheme::Spectral);
        let pair = ClebschPair::new(PhaseField::from_fn(&g, |_, p| (-p * p).exp()), PhaseField::from_fn(&g, |q, _| q.sin())).unwrap();
        let pi = clebsch_momentum(&pair);
        let exact = PhaseField::from_fn(&g, |q, p| (-p * p).exp() * q.cos());
        assert!(pi.pi_q.max_abs_diff(&exact) < 1e-13);
        assert!(pi.pi_p.max_abs() < 1e-13);

        let pair = ClebschPair::new(PhaseField::constant(&g, 3.0), PhaseField::from_fn(&g, |q, p| q.cos() * (-p * p).exp())).unwrap();
        assert!(extract_density(&clebsch_momentum(&pair)).max_abs() < 1e-12);
    }

    #[test]
    fn clebsch_density_is_bracket_and_converges() {
        let err = |np: usize| {
            let g = grid(32, np, 6.0, PScheme::Fd4);
            let pair = ClebschPair::new(
                PhaseField::from_fn(&g, |q, p| (1.0 + 0.3 * q.cos()) * (-p * p / 2.0).exp()),
                PhaseField::from_fn(&g, |q, p| q.sin() * p + 0.2 * (2.0 * q).cos() * p * p),
            )
            .unwrap();
            let f = extract_density(&clebsch_momentum(&pair));
            f.max_abs_diff(&canonical_bracket(&pair.beta, &pair.alpha))
        };
        let (e1, e2) = (err(96), err(192));
        assert!(e2 < 1e-3);
        assert!((e1 / e2).log2() > 3.5, "order {}", (e1 / e2).log2());
    }

    #[test]
    fn bracket_examples() {
        let g = grid(32, 64, 4.0, PScheme::Fd4);
        let a = PhaseField::from_fn(&g, |q, _| q.sin());
        let b = PhaseField::from_fn(&g, |_, p| p);
        let exact = PhaseField::from_fn(&g, |q, _| q.cos());
        assert!(canonical_bracket(&a, &b).max_abs_diff(&exact) < 1e-12);
        assert_eq!(canonical_bracket(&a, &a).max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_vector_field_examples() {
        let g = grid(32, 64, 4.0, PScheme::Fd4);
        let params = PhysParams { m: 2.0, ..Default::default() };
        let h = PhaseField::from_fn(&g, |_, p| p * p / (2.0 * params.m));
        let x = hamiltonian_vector_field(&h);
        assert!(x.u.max_abs_diff(&PhaseField::from_fn(&g, |_, p| p / 2.0)) < 1e-12);
        assert!(x.v.max_abs() < 1e-12);

        let h = PhaseField::from_fn(&g, |q, _| 0.7 * q.cos());
        let x = hamiltonian_vector_field(&h);
        assert!(x.u.max_abs() < 1e-12);
        assert!(x.v.max_abs_diff(&PhaseField::from_fn(&g, |q, _| 0.7 * q.sin())) < 1e-12);

        let h = PhaseField::from_fn(&g, |q, p| p * p / 2.0 + q.cos());
        assert!(hamiltonian_vector_field(&h).apply(&h).max_abs() < 1e-12);
    }

    #[test]
    fn min_density_examples() {
        let g = grid(16, 64, 6.0, PScheme::Fd4);
        assert!(min_density(&PhaseField::from_fn(&g, |_, p| (-p * p / 2.0).exp())) > 0.0);
        assert_eq!(min_density(&PhaseField::from_fn(&g, |q, _| q.cos())), -1.0);
        assert_eq!(min_density(&PhaseField::zeros(&g)), 0.0);
    }

    fn smooth_field(g: &Arc<Grid>, c: &[f64]) -> PhaseField {
        let c = c.to_vec();
        PhaseField::from_fn(g, move |q, p| {
            c[0] * q.sin() * p + c[1] * (2.0 * q).cos() * (-p * p / 3.0).exp() + c[2] * (0.4 * p).sin() + c[3] * (q + 0.1 * p * p).cos()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn gauge_invariance_and_linearity(c in proptest::collection::vec(-1.0f64..1.0, 12)) {
            let g = grid(32, 64, 4.0, PScheme::Fd4);
            let pi = MomentumField::new(smooth_field(&g, &c[0..4]), smooth_field(&g, &c[4..8])).unwrap();
            let chi = smooth_field(&g, &c[8..12]);
            let chi2 = smooth_field(&g, &c[4..8]);
            let f0 = extract_density(&pi);
            let f1 = extract_density(&gauge_shift(&pi, &chi));
            prop_assert!(f0.max_abs_diff(&f1) <= 1e-12 * (1.0 + f0.max_abs()));

            let a = gauge_shift(&gauge_shift(&pi, &chi), &chi2);
            let b = gauge_shift(&pi, &(&chi + &chi2));
            prop_assert!(a.max_abs_diff(&b) <= 1e-12 * (1.0 + a.max_abs()));

            let mut sum = pi.clone();
            sum.axpy(2.5, &gauge_shift(&pi, &chi));
            let lhs = extract_density(&sum);
            let rhs = &f0 + &(&f1 * 2.5);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));

            let a = smooth_field(&g, &c[0..4]);
            let b = smooth_field(&g, &c[8..12]);
            let s = &canonical_bracket(&a, &b) + &canonical_bracket(&b, &a);
            prop_assert!(s.max_abs() <= 1e-13 * (1.0 + a.max_abs() * b.max_abs()));
        }
    }
}
