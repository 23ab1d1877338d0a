//! Scenario runs: initial data, time loop, diagnostics and snapshots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::config::{Formulation, RunConfig, Scenario};
use super::snapshot::write_snapshot;
use crate::density::{density_cfl, vlasov_rhs};
use crate::error::{Error, Result};
use crate::euler2d::{euler_energy, euler_rhs, stream_from_vorticity};
use crate::fields::{extract_density, gauge_shift, min_density, MomentumField, PhysParams};
use crate::functionals::{casimirs, h_lp_f};
use crate::grid::{Grid, PhaseField};
use crate::integrate::{rk4_step, warn_if_unstable};
use crate::momentum::{h0_functional, init_momentum_from_density, momentum_cfl, rate, Flow};
use crate::poisson::{constraint_residual, potential_from_density, potential_from_momentum};
use crate::scenarios;

pub const CSV_HEADER: &str = "t,H_lp,mass,l2_casimir,min_f,constraint_residual_max,cross_formulation_linf,h0";

/// A state being evolved.
#[derive(Clone, Debug)]
pub enum Evolved {
    Density(PhaseField),
    Momentum(MomentumField, Flow),
    Fluid(PhaseField),
}

impl Evolved {
    fn step(&self, dt: f64, params: &PhysParams) -> Result<Evolved> {
        Ok(match self {
            Evolved::Density(f) => Evolved::Density(rk4_step(f, dt, |s| vlasov_rhs(s, params))?),
            Evolved::Momentum(pi, flow) => Evolved::Momentum(rk4_step(pi, dt, |s| rate(s, params, *flow))?, *flow),
            Evolved::Fluid(w) => Evolved::Fluid(rk4_step(w, dt, euler_rhs)?),
        })
    }

    /// The transported scalar: `f`, the extracted density, or `ω`.
    pub fn scalar(&self) -> PhaseField {
        match self {
            Evolved::Density(f) | Evolved::Fluid(f) => f.clone(),
            Evolved::Momentum(pi, _) => extract_density(pi),
        }
    }

    fn stability_bound(&self, params: &PhysParams) -> Result<f64> {
        match self {
            Evolved::Density(f) => density_cfl(f, params),
            Evolved::Momentum(pi, _) => momentum_cfl(pi, params),
            Evolved::Fluid(w) => {
                let psi = stream_from_vorticity(w)?;
                let speed = psi.ddq().max_abs().max(psi.ddp().max_abs());
                Ok(if speed > 0.0 { 0.5 * w.grid().dq() / speed } else { f64::INFINITY })
            }
        }
    }

    fn snapshot(&self, dir: &Path, index: usize, t: f64) -> Result<()> {
        match self {
            Evolved::Density(f) => write_snapshot(dir, "f", index, t, f).map(drop),
            Evolved::Fluid(w) => write_snapshot(dir, "omega", index, t, w).map(drop),
            Evolved::Momentum(pi, _) => {
                write_snapshot(dir, "pi_q", index, t, &pi.pi_q)?;
                write_snapshot(dir, "pi_p", index, t, &pi.pi_p)?;
                write_snapshot(dir, "f", index, t, &extract_density(pi)).map(drop)
            }
        }
    }
}

/// One diagnostics line.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub h_lp: f64,
    pub mass: f64,
    pub l2_casimir: f64,
    pub min_f: f64,
    pub constraint_residual_max: f64,
    pub cross_formulation_linf: Option<f64>,
    pub h0: Option<f64>,
}

impl Diagnostics {
    pub fn csv_line(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        format!(
            "{},{:e},{:e},{:e},{:e},{:e},{},{}",
            self.t,
            self.h_lp,
            self.mass,
            self.l2_casimir,
            self.min_f,
            self.constraint_residual_max,
            opt(self.cross_formulation_linf),
            opt(self.h0)
        )
    }
}

pub fn diagnose(t: f64, state: &Evolved, partner: Option<&Evolved>, params: &PhysParams) -> Result<Diagnostics> {
    let f = state.scalar();
    let c = casimirs(&f);
    let (h_lp, constraint, h0) = match state {
        Evolved::Density(f) => {
            let phi = potential_from_density(f, params)?;
            (h_lp_f(f, params)?, constraint_residual(&phi, f, params).max_abs(), None)
        }
        Evolved::Momentum(pi, _) => {
            let phi = potential_from_momentum(pi, params)?;
            (h_lp_f(&f, params)?, constraint_residual(&phi, &f, params).max_abs(), Some(h0_functional(pi, params)?))
        }
        Evolved::Fluid(w) => {
            let psi = stream_from_vorticity(w)?;
            let lap = &psi.ddq().ddq() + &psi.ddp().ddp();
            (euler_energy(w)?, lap.max_abs_diff(w), None)
        }
    };
    Ok(Diagnostics {
        t,
        h_lp,
        mass: c.mass,
        l2_casimir: c.l2,
        min_f: min_density(&f),
        constraint_residual_max: constraint,
        cross_formulation_linf: partner.map(|p| p.scalar().max_abs_diff(&f)),
        h0,
    })
}

/// Primary state and optional partner for a configuration.
pub fn initial_states(cfg: &RunConfig, grid: &Arc<Grid>) -> Result<(Evolved, Option<Evolved>)> {
    if cfg.scenario == Scenario::TaylorGreen {
        if cfg.paired {
            log::warn!("paired runs are not defined for the fluid scenario; ignoring");
        }
        return Ok((Evolved::Fluid(scenarios::taylor_green(grid)), None));
    }
    let f0 = match cfg.scenario {
        Scenario::Uniform => scenarios::uniform(grid),
        Scenario::Landau | Scenario::GaugeDemo => scenarios::landau(grid, cfg.epsilon, cfg.k),
        Scenario::TwoStream => scenarios::two_stream(grid, cfg.epsilon, cfg.k, cfg.v0, cfg.vt),
        Scenario::TaylorGreen => unreachable!(),
    };
    let momentum = |flow| -> Result<Evolved> { Ok(Evolved::Momentum(init_momentum_from_density(&f0)?, flow)) };
    let primary = match cfg.formulation.flow() {
        None => Evolved::Density(f0.clone()),
        Some(flow) => momentum(flow)?,
    };
    let partner = match (&primary, cfg.scenario) {
        (Evolved::Momentum(pi, flow), Scenario::GaugeDemo) => {
            let chi = scenarios::gauge_function(grid, cfg.chi_amplitude, cfg.chi_k);
            Some(Evolved::Momentum(gauge_shift(pi, &chi), *flow))
        }
        _ if !cfg.paired => None,
        (Evolved::Density(_), _) => Some(momentum(Flow::MomentumVlasov)?),
        _ => Some(Evolved::Density(f0)),
    };
    Ok((primary, partner))
}

/// Output times `0, Δ, 2Δ, …, t_end`: `⌈t_end/Δ⌉ + 1` entries.
pub fn output_times(t_end: f64, interval: f64) -> Vec<f64> {
    let n = (t_end / interval - 1e-9).ceil().max(0.0) as usize;
    let mut ts: Vec<f64> = (0..n).map(|k| k as f64 * interval).collect();
    ts.push(t_end);
    ts
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub rows: Vec<Diagnostics>,
    pub initial: Evolved,
    pub last: Evolved,
    pub steps: usize,
}

/// Run the configured scenario, writing `diagnostics.csv`, `run_manifest.ini`
/// and (optionally) snapshots into the output directory.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let grid = cfg.grid_spec()?.build()?;
    let params = cfg.physics()?;
    let out_dir = cfg.out_dir.clone();
    fs::create_dir_all(&out_dir)?;
    fs::write(out_dir.join("run_manifest.ini"), cfg.to_ini_string())?;
    let snap_dir = out_dir.join("snapshots");

    let (mut state, mut partner) = initial_states(cfg, &grid)?;
    let initial = state.clone();
    let bound = state.stability_bound(&params)?;
    warn_if_unstable(cfg.dt, bound);

    let times = output_times(cfg.t_end, cfg.output_interval);
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut rows = Vec::with_capacity(times.len());
    let mut steps = 0usize;
    let mut t = 0.0;
    for (index, &target) in times.iter().enumerate() {
        let span = target - t;
        if span > 0.0 {
            let n = (span / cfg.dt - 1e-9).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                steps += 1;
                let blown = |e: Error| match e {
                    Error::NonFinite { what, .. } => Error::NonFinite { what, step: steps },
                    other => other,
                };
                state = state.step(h, &params).map_err(blown)?;
                if let Some(p) = &partner {
                    partner = Some(p.step(h, &params).map_err(blown)?);
                }
            }
        }
        t = target;
        let d = diagnose(t, &state, partner.as_ref(), &params)?;
        log::info!("t = {t:.4}  H_lp = {:.10e}  min_f = {:.3e}", d.h_lp, d.min_f);
        let _ = writeln!(csv, "{}", d.csv_line());
        rows.push(d);
        if cfg.snapshots {
            state.snapshot(&snap_dir, index, t)?;
        }
    }
    fs::write(out_dir.join("diagnostics.csv"), csv)?;
    Ok(RunOutcome { out_dir, rows, initial, last: state, steps })
}

/// Apply command-line overrides to a loaded configuration.
pub fn with_overrides(mut cfg: RunConfig, formulation: Option<Formulation>, out: Option<PathBuf>) -> Result<RunConfig> {
    if let Some(f) = formulation {
        cfg.formulation = f;
    }
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    cfg.validate()?;
    Ok(cfg)
}
