//! Command-line surface: `simulate`, `verify`, `compare`.
//!
//! Exit codes: 0 success, 1 failed verification or runtime error, 2 bad
//! configuration, 3 numerical blow-up.

pub mod config;
pub mod simulate;
pub mod snapshot;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::euler2d::{comparison_table, fluid_summary, plasma_summary};
use config::{Formulation, RunConfig};
use simulate::simulate;
use verify::{parse_grid, verify, Subset, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "vml", version, about = "Vlasov-Poisson in density and momentum variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write diagnostics.csv, run_manifest.ini and snapshots.
    Simulate {
        config: PathBuf,
        #[arg(long, value_parser = parse_formulation)]
        formulation: Option<Formulation>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity checks and print a pass/fail table.
    Verify {
        /// Optional config supplying the physical constants.
        config: Option<PathBuf>,
        /// Resolution as NxM (q points x p points).
        #[arg(long)]
        grid: Option<String>,
        /// all, momentum, derivatives or structure.
        #[arg(long, default_value = "all")]
        subset: String,
        /// Replace every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run a plasma and a fluid configuration and print the side-by-side table.
    Compare {
        plasma: PathBuf,
        euler: PathBuf,
        /// Also write the table to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_formulation(s: &str) -> std::result::Result<Formulation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Size the global thread pool from `VML_THREADS` (unset or 0: automatic).
pub fn init_threads() {
    let n = std::env::var("VML_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size thread pool: {e}");
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidGrid(_) | Error::InvalidParams(_) => EXIT_CONFIG,
        Error::NonFinite { .. } => EXIT_BLOW_UP,
        _ => EXIT_FAILED,
    }
}

fn report(e: &Error) -> i32 {
    match e {
        Error::NonFinite { what, step } => eprintln!("numerical blow-up: non-finite {what} at step {step}"),
        other => eprintln!("error: {other}"),
    }
    exit_code(e)
}

/// Parse arguments, run, and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    init_threads();
    match cli.command {
        Command::Simulate { config, formulation, out } => {
            let result = RunConfig::from_file(&config)
                .and_then(|c| simulate::with_overrides(c, formulation, out))
                .and_then(|c| simulate(&c));
            match result {
                Ok(outcome) => {
                    println!(
                        "wrote {} rows after {} steps to {}",
                        outcome.rows.len(),
                        outcome.steps,
                        outcome.out_dir.join("diagnostics.csv").display()
                    );
                    EXIT_OK
                }
                Err(e) => report(&e),
            }
        }
        Command::Verify { config, grid, subset, tolerance } => match verify_options(config, grid, &subset, tolerance) {
            Ok(opts) => match verify(&opts) {
                Ok(r) => {
                    print!("{}", r.table());
                    if r.all_passed() {
                        EXIT_OK
                    } else {
                        EXIT_FAILED
                    }
                }
                Err(e) => report(&e),
            },
            Err(e) => report(&e),
        },
        Command::Compare { plasma, euler, out } => match compare(&plasma, &euler) {
            Ok(table) => {
                print!("{table}");
                if let Some(path) = out {
                    if let Err(e) = std::fs::write(&path, &table) {
                        return report(&Error::Io(e));
                    }
                }
                EXIT_OK
            }
            Err(e) => report(&e),
        },
    }
}

fn verify_options(
    config: Option<PathBuf>,
    grid: Option<String>,
    subset: &str,
    tolerance: Option<f64>,
) -> Result<VerifyOptions> {
    let mut opts = VerifyOptions { subset: subset.parse::<Subset>()?, tolerance, ..Default::default() };
    if let Some(path) = config {
        opts.params = RunConfig::from_file(&path)?.physics()?;
    }
    if let Some(g) = grid {
        (opts.n_q, opts.n_p) = parse_grid(&g)?;
    }
    if let Some(t) = tolerance {
        if !(t >= 0.0) {
            return Err(Error::Config(format!("tolerance must be non-negative, got {t}")));
        }
    }
    Ok(opts)
}

/// Run both configurations and build the comparison table.
pub fn compare(plasma: &std::path::Path, euler: &std::path::Path) -> Result<String> {
    let pc = RunConfig::from_file(plasma)?;
    let ec = RunConfig::from_file(euler)?;
    if pc.scenario.is_fluid() || !ec.scenario.is_fluid() {
        return Err(Error::Config("compare expects a plasma config followed by a taylor_green config".into()));
    }
    let p = simulate(&pc)?;
    let e = simulate(&ec)?;
    let p_label = format!("{} ({})", pc.scenario, pc.formulation);
    let ps = plasma_summary(&p_label, &p.initial.scalar(), &p.last.scalar(), pc.t_end, &pc.physics()?)?;
    let es = fluid_summary(ec.scenario.name(), &e.initial.scalar(), &e.last.scalar(), ec.t_end)?;
    Ok(comparison_table(&ps, &es))
}
