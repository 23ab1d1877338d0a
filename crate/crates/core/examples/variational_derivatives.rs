//! Analytic functional derivatives against central differences, with the
//! error at two step sizes to show the second-order trend.
//!
//!     cargo run --release --example variational_derivatives

use std::f64::consts::PI;

use vlasov_core::fields::{MomentumField, PhysParams};
use vlasov_core::functionals::{variational_check, Functional, State};
use vlasov_core::grid::{GridSpec, PScheme};
use vlasov_core::momentum::init_momentum_from_density;
use vlasov_core::scenarios::{decaying_function, decaying_momentum, landau};

fn main() -> vlasov_core::Result<()> {
    let grid = GridSpec::new(64, 128, 4.0 * PI, 8.0, PScheme::Fd4)?.build()?;
    let params = PhysParams::default();
    let cases = [
        (
            Functional::HlpF,
            State::Density(landau(&grid, 0.2, 0.5)),
            State::Density(decaying_function(&grid, 0.3)),
        ),
        (
            Functional::HlpPi,
            State::Momentum(decaying_momentum(&grid)),
            State::Momentum(MomentumField::new(decaying_function(&grid, 0.1), decaying_function(&grid, 1.1))?),
        ),
        (
            Functional::H0,
            State::Momentum(init_momentum_from_density(&landau(&grid, 0.1, 0.5))?),
            State::Momentum(decaying_momentum(&grid)),
        ),
    ];
    for (functional, state, dir) in &cases {
        for eps in [1e-3, 5e-4] {
            let c = variational_check(*functional, state, dir, eps, &params)?;
            println!(
                "{functional:?} eps {eps:.0e}: analytic {:+.10e}  fd {:+.10e}  rel {:.2e}",
                c.analytic, c.finite_difference, c.relative_error
            );
        }
    }
    Ok(())
}
