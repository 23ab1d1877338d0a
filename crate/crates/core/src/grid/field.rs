use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use ndarray::{Array1, Array2, Axis, Zip};

use super::Grid;
use crate::error::{Error, Result};

fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> bool {
    Arc::ptr_eq(a, b) || a.spec() == b.spec()
}

/// A scalar function on phase space, `n_q x n_p`, row index = q.
#[derive(Clone, Debug)]
pub struct PhaseField {
    grid: Arc<Grid>,
    values: Array2<f64>,
}

/// A function of q only.
#[derive(Clone, Debug)]
pub struct ConfigField {
    grid: Arc<Grid>,
    values: Array1<f64>,
}

impl PhaseField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { grid: grid.clone(), values: Array2::zeros((grid.n_q(), grid.n_p())) }
    }

    pub fn constant(grid: &Arc<Grid>, c: f64) -> Self {
        Self { grid: grid.clone(), values: Array2::from_elem((grid.n_q(), grid.n_p()), c) }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let (q, p) = (grid.q(), grid.p());
        let values = Array2::from_shape_fn((grid.n_q(), grid.n_p()), |(i, j)| f(q[i], p[j]));
        Self { grid: grid.clone(), values }
    }

    pub fn from_array(grid: &Arc<Grid>, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (grid.n_q(), grid.n_p()) {
            return Err(Error::InvalidGrid(format!(
                "array shape {:?} does not match grid {}x{}",
                values.dim(),
                grid.n_q(),
                grid.n_p()
            )));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Broadcast a p-profile over all q rows.
    pub fn from_p_profile(grid: &Arc<Grid>, g: &[f64]) -> Self {
        assert_eq!(g.len(), grid.n_p());
        let values = Array2::from_shape_fn((grid.n_q(), grid.n_p()), |(_, j)| g[j]);
        Self { grid: grid.clone(), values }
    }

    /// Broadcast a q-only field over all p columns.
    pub fn from_config(c: &ConfigField) -> Self {
        let grid = c.grid.clone();
        let values = Array2::from_shape_fn((grid.n_q(), grid.n_p()), |(i, _)| c.values[i]);
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    fn with_values(&self, values: Array2<f64>) -> Self {
        Self { grid: self.grid.clone(), values }
    }

    fn check(&self, other: &Self) {
        assert!(same_grid(&self.grid, &other.grid), "phase fields live on different grids");
    }

    pub fn ddq(&self) -> Self {
        self.with_values(self.grid.ddq_phase(&self.values))
    }

    pub fn ddp(&self) -> Self {
        self.with_values(self.grid.ddp_rows(&self.values))
    }

    /// `(D_p + D_p^T) self`, the part of the p-derivative that fails to be skew.
    pub fn boundary_form_p(&self) -> Self {
        self.with_values(self.grid.boundary_form_rows(&self.values))
    }

    /// Spectral q-antiderivative of the mean-free, Nyquist-free part.
    pub fn antiderivative_q(&self) -> Self {
        self.with_values(self.grid.intq_phase(&self.values))
    }

    /// Rectangle-rule integral over phase space.
    pub fn integrate_qp(&self) -> f64 {
        self.values.sum() * self.grid.dq() * self.grid.dp()
    }

    /// Integral over p at each q.
    pub fn integrate_p(&self) -> ConfigField {
        let dp = self.grid.dp();
        let values = self.values.sum_axis(Axis(1)) * dp;
        ConfigField { grid: self.grid.clone(), values }
    }

    /// Mean over q at each p.
    pub fn q_mean(&self) -> Vec<f64> {
        self.values.mean_axis(Axis(0)).expect("non-empty").to_vec()
    }

    /// Quadrature inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        self.check(other);
        Zip::from(&self.values).and(&other.values).fold(0.0, |acc, a, b| acc + a * b) * self.grid.dq() * self.grid.dp()
    }

    /// Quadrature L2 norm.
    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_values(self.values.mapv(f))
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.check(other);
        self.with_values(Zip::from(&self.values).and(&other.values).map_collect(|a, b| f(*a, *b)))
    }

    /// Multiply each q-row by `c(q)`.
    pub fn mul_q(&self, c: &ConfigField) -> Self {
        assert!(same_grid(&self.grid, &c.grid));
        let mut v = self.values.clone();
        for (mut row, s) in v.axis_iter_mut(Axis(0)).zip(c.values.iter()) {
            row *= *s;
        }
        self.with_values(v)
    }

    /// Multiply each p-column by `w(p)`.
    pub fn mul_p(&self, w: &[f64]) -> Self {
        assert_eq!(w.len(), self.grid.n_p());
        let mut v = self.values.clone();
        for mut row in v.axis_iter_mut(Axis(0)) {
            for (x, s) in row.iter_mut().zip(w) {
                *x *= s;
            }
        }
        self.with_values(v)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.with_values(&self.values * a)
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Self) {
        self.check(x);
        self.values.scaled_add(a, &x.values);
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.check(other);
        Zip::from(&self.values).and(&other.values).fold(0.0, |m: f64, a, b| m.max((a - b).abs()))
    }
}

/// Discrete p-boundary flux `∫ [a b]_{p-ends} dq` of the configured p-derivative:
/// `∫∫ (a ∂_p b + b ∂_p a) dμ` evaluated exactly on the grid. It vanishes in
/// spectral-p mode and whenever `a` or `b` vanishes near both p-ends.
pub fn boundary_flux(a: &PhaseField, b: &PhaseField) -> f64 {
    a.check(b);
    let form = a.grid.boundary_form();
    let mut total = 0.0;
    for i in 0..a.grid.n_q() {
        for &(j, l, w) in form {
            total += a.values[[i, j]] * w * b.values[[i, l]];
        }
    }
    total * a.grid.dq() * a.grid.dp()
}

impl ConfigField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { grid: grid.clone(), values: Array1::zeros(grid.n_q()) }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.q().iter().map(|q| f(*q)).collect();
        Self { grid: grid.clone(), values }
    }

    pub fn from_array(grid: &Arc<Grid>, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.n_q() {
            return Err(Error::InvalidGrid(format!("length {} does not match n_q = {}", values.len(), grid.n_q())));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array1<f64> {
        self.values
    }

    fn with_values(&self, values: Array1<f64>) -> Self {
        Self { grid: self.grid.clone(), values }
    }

    pub fn ddq(&self) -> Self {
        self.with_values(self.grid.ddq_config(&self.values))
    }

    /// Spectral second derivative, `-k^2` on every mode including Nyquist.
    pub fn d2dq2(&self) -> Self {
        self.with_values(self.grid.d2dq2_config(&self.values))
    }

    pub fn mean(&self) -> f64 {
        self.values.mean().unwrap_or(0.0)
    }

    pub fn integrate(&self) -> f64 {
        self.values.sum() * self.grid.dq()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_values(self.values.mapv(f))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.with_values(&self.values * a)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(same_grid(&self.grid, &other.grid));
        Zip::from(&self.values).and(&other.values).fold(0.0, |m: f64, a, b| m.max((a - b).abs()))
    }
}

macro_rules! binop {
    ($ty:ident, $tr:ident, $method:ident, $op:tt) => {
        impl $tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                assert!(same_grid(&self.grid, &rhs.grid), "fields live on different grids");
                $ty { grid: self.grid.clone(), values: &self.values $op &rhs.values }
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                &self $op &rhs
            }
        }
    };
}

binop!(PhaseField, Add, add, +);
binop!(PhaseField, Sub, sub, -);
binop!(PhaseField, Mul, mul, *);
binop!(ConfigField, Add, add, +);
binop!(ConfigField, Sub, sub, -);
binop!(ConfigField, Mul, mul, *);

impl Mul<f64> for &PhaseField {
    type Output = PhaseField;
    fn mul(self, a: f64) -> PhaseField {
        self.scale(a)
    }
}

impl Mul<f64> for PhaseField {
    type Output = PhaseField;
    fn mul(self, a: f64) -> PhaseField {
        self.scale(a)
    }
}

impl Neg for &PhaseField {
    type Output = PhaseField;
    fn neg(self) -> PhaseField {
        self.scale(-1.0)
    }
}

impl Neg for PhaseField {
    type Output = PhaseField;
    fn neg(self) -> PhaseField {
        self.scale(-1.0)
    }
}
