//! The Lie-Poisson bracket on one-forms: antisymmetry, the Jacobi identity
//! of the canonical bracket, and skew-adjointness of the density operator.
//!
//!     cargo run --release --example bracket_algebra

use std::f64::consts::PI;

use vlasov_core::density::apply_jlp_f;
use vlasov_core::grid::{GridSpec, PScheme, PhaseField};
use vlasov_core::functionals::{jacobi_cyclic_sum, lie_poisson_bracket, transform_check};
use vlasov_core::scenarios::{decaying_function, decaying_momentum, landau};

fn main() -> vlasov_core::Result<()> {
    let grid = GridSpec::new(32, 128, 4.0 * PI, 8.0, PScheme::Spectral)?.build()?;
    let pi = decaying_momentum(&grid);
    let h = decaying_function(&grid, 0.2);
    let k = decaying_function(&grid, 1.7);
    let hk = lie_poisson_bracket(&pi, &h, &k);
    let kh = lie_poisson_bracket(&pi, &k, &h);
    println!("{{h,k}} = {hk:+.6e}, {{k,h}} = {kh:+.6e}");

    let small = GridSpec::new(24, 24, 2.0 * PI, PI, PScheme::Spectral)?.build()?;
    let a = PhaseField::from_fn(&small, |q, p| q.sin() * p.cos());
    let b = PhaseField::from_fn(&small, |q, p| (2.0 * q).cos() + p.sin());
    let c = PhaseField::from_fn(&small, |q, p| (q + p).sin());
    println!("Jacobi cyclic sum: {:.3e}", jacobi_cyclic_sum(&a, &b, &c).max_abs());

    let f = landau(&grid, 0.3, 0.5);
    let skew = h.inner(&apply_jlp_f(&f, &k)) + k.inner(&apply_jlp_f(&f, &h));
    println!("<h, J k> + <k, J h> = {skew:.3e}");
    println!("operator transformation gap: {:.3e}", transform_check(&pi, &k));
    Ok(())
}
