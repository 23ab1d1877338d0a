pub mod cli;
pub mod density;
pub mod error;
pub mod euler2d;
pub mod fields;
pub mod functionals;
pub mod grid;
pub mod integrate;
pub mod momentum;
pub mod poisson;
pub mod scenarios;

pub use error::{Error, Result};
