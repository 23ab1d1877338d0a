//! Evolve the same Landau initial data as a density and as a momentum
//! one-form, and compare the density extracted from the latter.
//!
//!     cargo run --release --example momentum_equivalence

use std::f64::consts::PI;

use vlasov_core::density::step_rk4_density;
use vlasov_core::fields::{extract_density, PhysParams};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::momentum::{init_momentum_from_density, step_rk4_momentum, Flow};
use vlasov_core::scenarios::landau;

fn main() -> vlasov_core::Result<()> {
    let params = PhysParams::default();
    let dt = 1.0 / 256.0;
    for n_p in [64, 128, 256] {
        let grid = GridSpec::new(64, n_p, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
        let mut f = landau(&grid, 0.05, 0.5);
        let mut pi = init_momentum_from_density(&f)?;
        println!("n_p = {n_p}: round trip {:.2e}", extract_density(&pi).max_abs_diff(&f));
        for _ in 0..(2.0 / dt) as usize {
            f = step_rk4_density(&f, dt, &params)?;
            pi = step_rk4_momentum(&pi, dt, &params, Flow::MomentumVlasov)?;
        }
        println!("         |f - D_f Pi| at t = 2: {:.3e}", extract_density(&pi).max_abs_diff(&f));
    }
    Ok(())
}
