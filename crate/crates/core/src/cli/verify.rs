//! End-to-end identity checks with a pass/fail table.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::density::vlasov_rhs;
use crate::error::{Error, Result};
use crate::fields::{extract_density, MomentumField, PhysParams};
use crate::functionals::{
    boundary_correction, h_lp_f, h_lp_pi, transform_check, variational_check, Functional, State,
};
use crate::grid::{GridSpec, PScheme};
use crate::integrate::rk4_step;
use crate::momentum::{canonical_h0_rhs, init_momentum_from_density, momentum_vlasov_rhs, rate_density};
use crate::scenarios::{decaying_function, decaying_momentum, landau};

/// Named checks. Each row is keyed by the identity it exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    /// Derivative of the density energy: full-charge single-particle Hamiltonian.
    DensityEnergyDerivative,
    /// Derivative of the momentum energy: the Hamiltonian vector field components.
    MomentumEnergyDerivative,
    /// Derivative of the quadratic Hamiltonian, including the Φ term.
    H0Derivative,
    /// Density and momentum formulations evolve the same density.
    DensityConsistency,
    /// `J_LP(f) = D_f J_LP(Π) D_f*`.
    OperatorTransform,
    /// `h_lp_pi(Π) = h_lp_f(D_f Π)` (with the p-boundary correction).
    EnergyIdentity,
    /// Canonical and momentum rates give the same density rate.
    CanonicalAgreement,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::DensityEnergyDerivative,
        Check::MomentumEnergyDerivative,
        Check::H0Derivative,
        Check::DensityConsistency,
        Check::OperatorTransform,
        Check::EnergyIdentity,
        Check::CanonicalAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::DensityEnergyDerivative => "density-energy-derivative",
            Check::MomentumEnergyDerivative => "momentum-energy-derivative",
            Check::H0Derivative => "h0-derivative",
            Check::DensityConsistency => "density-consistency",
            Check::OperatorTransform => "operator-transform",
            Check::EnergyIdentity => "energy-identity",
            Check::CanonicalAgreement => "canonical-agreement",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::DensityEnergyDerivative | Check::MomentumEnergyDerivative | Check::H0Derivative => 1e-6,
            Check::DensityConsistency => 1e-5,
            Check::OperatorTransform | Check::EnergyIdentity => 1e-8,
            Check::CanonicalAgreement => 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subset {
    All,
    Momentum,
    Derivatives,
    Structure,
}

impl Subset {
    pub fn checks(self) -> Vec<Check> {
        use Check::*;
        match self {
            Subset::All => Check::ALL.to_vec(),
            Subset::Momentum => vec![DensityConsistency, EnergyIdentity, CanonicalAgreement],
            Subset::Derivatives => vec![DensityEnergyDerivative, MomentumEnergyDerivative, H0Derivative],
            Subset::Structure => vec![OperatorTransform],
        }
    }
}

impl FromStr for Subset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(Subset::All),
            "momentum" => Ok(Subset::Momentum),
            "derivatives" => Ok(Subset::Derivatives),
            "structure" => Ok(Subset::Structure),
            other => Err(Error::Config(format!("unknown subset '{other}'; valid: all, momentum, derivatives, structure"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub n_q: usize,
    pub n_p: usize,
    pub params: PhysParams,
    pub subset: Subset,
    /// Replaces every default tolerance when set.
    pub tolerance: Option<f64>,
    /// Final time of the density-consistency run.
    pub t_end: f64,
    pub dt: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_q: 64,
            n_p: 128,
            params: PhysParams::default(),
            subset: Subset::All,
            tolerance: None,
            t_end: 1.0,
            dt: 1.0 / 128.0,
        }
    }
}

/// Parse `NxM`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let err = || Error::Config(format!("grid must look like 128x256, got '{s}'"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(err)?;
    Ok((a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check: Check,
    pub error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    /// Strict: a zero tolerance fails every check.
    pub fn passed(&self) -> bool {
        self.error < self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.results.iter().filter(|r| !r.passed()).map(|r| r.check.name()).collect()
    }

    pub fn table(&self) -> String {
        let w = self.results.iter().map(|r| r.check.name().len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:<w$}  {:>10}  {:>10}  result", "check", "error", "tolerance");
        for r in &self.results {
            let verdict = if r.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:<w$}  {:>10.3e}  {:>10.3e}  {verdict}", r.check.name(), r.error, r.tolerance);
        }
        let failing = self.failing();
        if failing.is_empty() {
            let _ = writeln!(out, "all {} checks passed", self.results.len());
        } else {
            let _ = writeln!(out, "failing: {}", failing.join(", "));
        }
        out
    }
}

pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut results = Vec::new();
    for check in opts.subset.checks() {
        let error = run_check(check, opts)?;
        let tolerance = opts.tolerance.unwrap_or(check.default_tolerance());
        log::info!("{}: {error:.3e}", check.name());
        results.push(CheckResult { check, error, tolerance });
    }
    Ok(VerifyReport { results })
}

fn run_check(check: Check, opts: &VerifyOptions) -> Result<f64> {
    let l_q = 4.0 * std::f64::consts::PI;
    let fd = GridSpec::new(opts.n_q, opts.n_p, l_q, 8.0, PScheme::Fd4)?.build()?;
    let params = &opts.params;
    match check {
        Check::DensityEnergyDerivative => {
            let f = State::Density(landau(&fd, 0.2, 0.5));
            let dir = State::Density(decaying_function(&fd, 0.3));
            Ok(variational_check(Functional::HlpF, &f, &dir, 1e-4, params)?.relative_error)
        }
        Check::MomentumEnergyDerivative => {
            let pi = State::Momentum(decaying_momentum(&fd));
            let dir = State::Momentum(MomentumField::new(decaying_function(&fd, 0.1), decaying_function(&fd, 1.1))?);
            Ok(variational_check(Functional::HlpPi, &pi, &dir, 1e-4, params)?.relative_error)
        }
        Check::H0Derivative => {
            let pi = State::Momentum(init_momentum_from_density(&landau(&fd, 0.1, 0.5))?);
            let dir = State::Momentum(decaying_momentum(&fd));
            Ok(variational_check(Functional::H0, &pi, &dir, 1e-4, params)?.relative_error)
        }
        Check::DensityConsistency => {
            let f0 = landau(&fd, 0.05, 0.5);
            let mut pi = init_momentum_from_density(&f0)?;
            let mut f = f0;
            let n = (opts.t_end / opts.dt).round().max(1.0) as usize;
            let h = opts.t_end / n as f64;
            for _ in 0..n {
                f = rk4_step(&f, h, |s| vlasov_rhs(s, params))?;
                pi = rk4_step(&pi, h, |s| momentum_vlasov_rhs(s, params))?;
            }
            Ok(extract_density(&pi).max_abs_diff(&f))
        }
        Check::OperatorTransform => {
            let sp = GridSpec::new(opts.n_q, opts.n_p, l_q, 10.0, PScheme::Spectral)?.build()?;
            Ok(transform_check(&decaying_momentum(&sp), &decaying_function(&sp, 0.7)))
        }
        Check::EnergyIdentity => {
            let synthetic = decaying_momentum(&fd);
            let a = (h_lp_pi(&synthetic, params)? - h_lp_f(&extract_density(&synthetic), params)?).abs();
            let physical = init_momentum_from_density(&landau(&fd, 0.05, 0.5))?;
            let b = (h_lp_pi(&physical, params)? + boundary_correction(&physical, params)?
                - h_lp_f(&extract_density(&physical), params)?)
            .abs();
            Ok(a.max(b))
        }
        Check::CanonicalAgreement => {
            let pi = init_momentum_from_density(&landau(&fd, 0.05, 0.5))?;
            let a = rate_density(&momentum_vlasov_rhs(&pi, params)?);
            let b = rate_density(&canonical_h0_rhs(&pi, params)?);
            Ok(a.max_abs_diff(&b))
        }
    }
}
