//! Adding an exact form dχ to Π does not change the extracted density,
//! statically or along the momentum flow.
//!
//!     cargo run --release --example gauge_symmetry

use std::f64::consts::PI;

use vlasov_core::fields::{extract_density, gauge_shift, PhysParams};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::momentum::{init_momentum_from_density, step_rk4_momentum, Flow};
use vlasov_core::scenarios::{gauge_function, landau};

fn main() -> vlasov_core::Result<()> {
    let grid = GridSpec::new(64, 256, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let mut a = init_momentum_from_density(&landau(&grid, 0.05, 0.5))?;
    let mut b = gauge_shift(&a, &gauge_function(&grid, 0.05, 0.5));
    println!("components differ by {:.3e}", a.max_abs_diff(&b));
    let dt = 1.0 / 256.0;
    for step in 0..=40 {
        if step % 10 == 0 {
            let gap = extract_density(&a).max_abs_diff(&extract_density(&b));
            println!("step {step:>3}: density gap {gap:.3e}");
        }
        a = step_rk4_momentum(&a, dt, &params, Flow::MomentumVlasov)?;
        b = step_rk4_momentum(&b, dt, &params, Flow::MomentumVlasov)?;
    }
    Ok(())
}
