//! The three routes to the potential: spectral, dense Green's kernel, and
//! directly from the momentum one-form.
//!
//!     cargo run --release --example poisson_constraint

use std::f64::consts::PI;

use vlasov_core::fields::{extract_density, PhysParams};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::momentum::init_momentum_from_density;
use vlasov_core::poisson::{
    constraint_residual, greens_kernel, potential_from_density, potential_from_momentum, solve_poisson_spectral,
};
use vlasov_core::scenarios::landau;

fn main() -> vlasov_core::Result<()> {
    let grid = GridSpec::new(64, 128, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let f = landau(&grid, 0.1, 0.5);
    let rho = f.integrate_p();

    let spectral = solve_poisson_spectral(&rho, &params)?;
    let kernel = greens_kernel(&grid).solve(&rho, &params)?;
    println!("spectral vs kernel:      {:.3e}", spectral.max_abs_diff(&kernel));

    let phi = potential_from_density(&f, &params)?;
    println!("constraint residual:     {:.3e}", constraint_residual(&phi, &f, &params).max_abs());

    let pi = init_momentum_from_density(&f)?;
    let from_pi = potential_from_momentum(&pi, &params)?;
    let from_f = potential_from_density(&extract_density(&pi), &params)?;
    println!("momentum vs extracted f: {:.3e}", from_pi.max_abs_diff(&from_f));
    println!("max |phi| = {:.4e} (linear theory: eps/k^2 = 0.4)", phi.max_abs());
    Ok(())
}
