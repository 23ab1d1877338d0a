//! The canonical flow generated by the quadratic Hamiltonian H0 and the
//! momentum-Vlasov flow move the density identically, though the one-forms
//! themselves differ by a gradient.
//!
//!     cargo run --release --example canonical_h0

use std::f64::consts::PI;

use vlasov_core::fields::{extract_density, PhysParams};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::momentum::{
    canonical_h0_rhs, h0_balance, h0_functional, init_momentum_from_density, momentum_vlasov_rhs, rate_density,
    step_rk4_momentum, Flow,
};
use vlasov_core::scenarios::landau;

fn main() -> vlasov_core::Result<()> {
    let grid = GridSpec::new(64, 256, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let pi = init_momentum_from_density(&landau(&grid, 0.05, 0.5))?;

    let a = momentum_vlasov_rhs(&pi, &params)?;
    let b = canonical_h0_rhs(&pi, &params)?;
    println!("one-form rates differ by        {:.3e}", a.max_abs_diff(&b));
    println!("extracted density rates differ by {:.3e}", rate_density(&a).max_abs_diff(&rate_density(&b)));

    let balance = h0_balance(&pi, &params)?;
    println!("dH0/dt balance: {balance:?}");

    let dt = 1.0 / 256.0;
    let (mut m, mut c) = (pi.clone(), pi);
    for _ in 0..256 {
        m = step_rk4_momentum(&m, dt, &params, Flow::MomentumVlasov)?;
        c = step_rk4_momentum(&c, dt, &params, Flow::CanonicalH0)?;
    }
    println!("after t = 1: density gap {:.3e}", extract_density(&m).max_abs_diff(&extract_density(&c)));
    println!("H0: momentum flow {:.6e}, canonical flow {:.6e}", h0_functional(&m, &params)?, h0_functional(&c, &params)?);
    Ok(())
}
