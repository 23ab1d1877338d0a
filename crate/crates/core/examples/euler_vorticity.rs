//! 2D incompressible Euler in vorticity form, driven by the same canonical
//! bracket as the Vlasov solver, and its side-by-side summary with a plasma run.
//!
//!     cargo run --release --example euler_vorticity

use std::f64::consts::PI;

use vlasov_core::density::step_rk4_density;
use vlasov_core::euler2d::{
    comparison_table, euler_energy, euler_enstrophy, euler_grid, evolve_euler, fluid_summary, plasma_summary,
};
use vlasov_core::fields::PhysParams;
use vlasov_core::grid::{GridSpec, PScheme, PhaseField};
use vlasov_core::scenarios::{landau, taylor_green};

fn main() -> vlasov_core::Result<()> {
    let grid = euler_grid(64)?;
    let tg = taylor_green(&grid);
    let after = evolve_euler(&tg, 1e-2, 500)?;
    println!("Taylor-Green steadiness over t = 5: {:.3e}", after.max_abs_diff(&tg));

    // A perturbed shear layer actually moves.
    let w0 = PhaseField::from_fn(&grid, |x, y| y.sin() + 0.1 * (2.0 * x).cos() * y.cos());
    let w = evolve_euler(&w0, 1e-2, 500)?;
    println!(
        "shear layer: energy {:.6e} -> {:.6e}, enstrophy {:.6e} -> {:.6e}",
        euler_energy(&w0)?,
        euler_energy(&w)?,
        euler_enstrophy(&w0),
        euler_enstrophy(&w)
    );

    let pg = GridSpec::new(32, 128, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let f0 = landau(&pg, 0.05, 0.5);
    let mut f = f0.clone();
    for _ in 0..640 {
        f = step_rk4_density(&f, 1.0 / 128.0, &params)?;
    }
    let p = plasma_summary("landau", &f0, &f, 5.0, &params)?;
    let e = fluid_summary("shear layer", &w0, &w, 5.0)?;
    print!("{}", comparison_table(&p, &e));
    Ok(())
}
