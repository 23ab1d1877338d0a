//! Linear Landau damping in the density formulation. Prints the amplitude of
//! the k = 0.5 electric-field mode and the conserved quantities.
//!
//!     cargo run --release --example landau_damping

use std::f64::consts::PI;

use vlasov_core::density::step_rk4_density;
use vlasov_core::fields::{min_density, PhysParams};
use vlasov_core::functionals::{casimirs, h_lp_f};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::poisson::potential_from_density;
use vlasov_core::scenarios::landau;

fn main() -> vlasov_core::Result<()> {
    let k = 0.5;
    let grid = GridSpec::new(64, 256, 2.0 * PI / k, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let mut f = landau(&grid, 0.01, k);
    let dt = 1.0 / 128.0;
    let c0 = casimirs(&f);
    let h0 = h_lp_f(&f, &params)?;

    println!("{:>6}  {:>12}", "t", "|E_1|");
    for step in 0..=(20.0 / dt) as usize {
        if step % 128 == 0 {
            let e = potential_from_density(&f, &params)?.ddq();
            let (mut re, mut im) = (0.0, 0.0);
            for (q, v) in grid.q().iter().zip(e.values()) {
                re += v * (k * q).cos();
                im += v * (k * q).sin();
            }
            let amp = 2.0 * re.hypot(im) / grid.n_q() as f64;
            println!("{:>6.2}  {amp:>12.4e}", step as f64 * dt);
        }
        f = step_rk4_density(&f, dt, &params)?;
    }
    let c = casimirs(&f);
    println!("expected damping rate for k = 0.5: 0.1533");
    println!("mass drift   {:.2e}", (c.mass - c0.mass).abs() / c0.mass);
    println!("energy drift {:.2e}", (h_lp_f(&f, &params)? - h0).abs() / h0);
    println!("l2 drift     {:.2e}", (c.l2 - c0.l2).abs() / c0.l2);
    println!("min f        {:.2e}", min_density(&f));
    Ok(())
}
