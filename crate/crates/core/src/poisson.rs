//! Periodic Poisson problem `∇²φ = −e(ρ − ρ̄)`, zero-mean gauge.

use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::fields::{MomentumField, PhysParams};
use crate::grid::{ConfigField, Grid, PhaseField, C64};

/// `(∇²)^{-1}` on the mean-free subspace, with `-k²` including the Nyquist mode.
fn inverse_laplacian_symbol(grid: &Grid) -> Vec<C64> {
    grid.q_axis()
        .wavenumbers()
        .iter()
        .map(|k| if *k == 0.0 { C64::new(0.0, 0.0) } else { C64::new(-1.0 / (k * k), 0.0) })
        .collect()
}

fn check_finite(c: &ConfigField, what: &str) -> Result<()> {
    if c.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { what: what.to_string(), step: 0 })
    }
}

fn check_mean_free(c: &ConfigField) -> Result<()> {
    let mean = c.mean();
    if mean.abs() > 1e-12 * (1.0 + c.max_abs()) {
        return Err(Error::NotMeanFree { mean });
    }
    Ok(())
}

pub fn solve_poisson_spectral(rho: &ConfigField, params: &PhysParams) -> Result<ConfigField> {
    check_finite(rho, "charge density")?;
    if !params.neutralize {
        check_mean_free(rho)?;
    }
    let grid = rho.grid();
    let source = rho.scale(-params.e);
    let phi = grid.q_multiplier_config(source.values(), &inverse_laplacian_symbol(grid));
    ConfigField::from_array(grid, phi)
}

/// Self-consistent potential of a density: `solve_poisson_spectral(∫f dp)`.
pub fn potential_from_density(f: &PhaseField, params: &PhysParams) -> Result<ConfigField> {
    solve_poisson_spectral(&f.integrate_p(), params)
}

/// `∇²φ + e(∫f dp − background)`; zero exactly on the constraint surface.
pub fn constraint_residual(phi: &ConfigField, f: &PhaseField, params: &PhysParams) -> ConfigField {
    let rho = f.integrate_p();
    let background = if params.neutralize { rho.mean() } else { 0.0 };
    let charge = rho.map(|r| params.e * (r - background));
    &phi.d2dq2() + &charge
}

/// Potential of the momentum form of the constraint, `∇²φ = e∫∂_qΠ^p dp`.
pub fn potential_from_momentum(pi: &MomentumField, params: &PhysParams) -> Result<ConfigField> {
    let sigma = pi.pi_p.ddq().integrate_p();
    check_finite(&sigma, "momentum field")?;
    let grid = sigma.grid();
    let phi = grid.q_multiplier_config(&(sigma.values() * params.e), &inverse_laplacian_symbol(grid));
    ConfigField::from_array(grid, phi)
}

/// Periodic Green's function `K(q | q́)` of `−∇²` on mean-free sources,
/// so that `φ = e K (ρ − ρ̄) Δq`.
#[derive(Clone, Debug)]
pub struct GreensKernel {
    grid: Arc<Grid>,
    k: Array2<f64>,
}

pub fn greens_kernel(grid: &Arc<Grid>) -> GreensKernel {
    let n = grid.n_q();
    let mut unit = vec![0.0; n];
    unit[0] = 1.0;
    let symbol: Vec<C64> = inverse_laplacian_symbol(grid).into_iter().map(|s| -s).collect();
    let mut col = vec![0.0; n];
    grid.q_axis().filter_real_lines(1, &unit, |_, i| i, &symbol, &mut col);
    let inv_dq = 1.0 / grid.dq();
    let k = Array2::from_shape_fn((n, n), |(i, j)| col[(i + n - j) % n] * inv_dq);
    GreensKernel { grid: grid.clone(), k }
}

impl GreensKernel {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.k
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// `φ = e K (ρ − ρ̄) Δq`
    pub fn solve(&self, rho: &ConfigField, params: &PhysParams) -> Result<ConfigField> {
        check_finite(rho, "charge density")?;
        if !params.neutralize {
            check_mean_free(rho)?;
        }
        let mean = rho.mean();
        let src = rho.values().mapv(|r| r - mean);
        let phi = self.k.dot(&src) * (params.e * self.grid.dq());
        ConfigField::from_array(&self.grid, phi)
    }

    /// Derivatives of the kernel with respect to its source point, `∂^order_q́ K(q | q́)`,
    /// taken with the spectral first-derivative operator.
    pub fn source_derivative(&self, order: usize) -> Array2<f64> {
        let n = self.grid.n_q();
        let mut m = self.k.clone();
        for _ in 0..order {
            let src = m.as_standard_layout().to_owned();
            let src = src.as_slice().expect("standard layout");
            let mut out = vec![0.0; n * n];
            let symbol = self.grid.q_axis().first_derivative_symbol(false);
            self.grid.q_axis().filter_real_lines(n, src, |l, j| l * n + j, &symbol, &mut out);
            m = Array2::from_shape_vec((n, n), out).expect("shape");
        }
        m
    }

    /// `∫ M(q | q́) s(q́) dq́` for a kernel-shaped matrix `M`.
    pub fn integrate_against(&self, m: &Array2<f64>, s: &Array1<f64>) -> Array1<f64> {
        m.dot(s) * self.grid.dq()
    }
}
