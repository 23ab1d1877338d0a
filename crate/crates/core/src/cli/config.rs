//! Run configuration: INI sections `[grid]`, `[physics]`, `[time]`,
//! `[scenario]`, `[output]`. Every key is optional; unset keys take the
//! defaults of the selected scenario.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::error::{Error, Result};
use crate::fields::PhysParams;
use crate::grid::{GridSpec, PScheme};
use crate::momentum::Flow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Uniform,
    Landau,
    TwoStream,
    GaugeDemo,
    TaylorGreen,
}

impl Scenario {
    pub const ALL: [Scenario; 5] =
        [Scenario::Uniform, Scenario::Landau, Scenario::TwoStream, Scenario::GaugeDemo, Scenario::TaylorGreen];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Uniform => "uniform",
            Scenario::Landau => "landau",
            Scenario::TwoStream => "two_stream",
            Scenario::GaugeDemo => "gauge_demo",
            Scenario::TaylorGreen => "taylor_green",
        }
    }

    pub fn is_fluid(self) -> bool {
        self == Scenario::TaylorGreen
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Scenario::ALL.into_iter().find(|sc| sc.name() == key).ok_or_else(|| {
            let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
            Error::Config(format!("unknown scenario '{s}'; valid scenarios: {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formulation {
    Density,
    Momentum,
    Canonical,
}

impl Formulation {
    pub fn flow(self) -> Option<Flow> {
        match self {
            Formulation::Density => None,
            Formulation::Momentum => Some(Flow::MomentumVlasov),
            Formulation::Canonical => Some(Flow::CanonicalH0),
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Density => "density",
            Formulation::Momentum => "momentum",
            Formulation::Canonical => "canonical",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "density" => Ok(Formulation::Density),
            "momentum" => Ok(Formulation::Momentum),
            "canonical" => Ok(Formulation::Canonical),
            other => Err(Error::Config(format!("unknown formulation '{other}'; valid: density, momentum, canonical"))),
        }
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_q: usize,
    pub n_p: usize,
    pub l_q: f64,
    pub p_max: f64,
    pub p_deriv: PScheme,
    pub dealias: bool,

    pub e: f64,
    pub m: f64,
    pub neutralize: bool,

    pub dt: f64,
    pub t_end: f64,
    pub output_interval: f64,

    pub scenario: Scenario,
    pub formulation: Formulation,
    pub epsilon: f64,
    pub k: f64,
    pub v0: f64,
    pub vt: f64,
    pub chi_amplitude: f64,
    pub chi_k: f64,

    pub out_dir: PathBuf,
    pub snapshots: bool,
    pub paired: bool,
}

const KEYS: &[(&str, &[&str])] = &[
    ("grid", &["n_q", "n_p", "l_q", "p_max", "p_deriv", "dealias"]),
    ("physics", &["e", "m", "neutralize"]),
    ("time", &["dt", "t_end", "output_interval"]),
    ("scenario", &["name", "formulation", "epsilon", "k", "v0", "vt", "chi_amplitude", "chi_k"]),
    ("output", &["dir", "snapshots", "paired"]),
];

impl RunConfig {
    /// Defaults for a scenario before any user overrides.
    pub fn defaults(scenario: Scenario) -> Self {
        let mut c = RunConfig {
            n_q: 128,
            n_p: 256,
            l_q: 4.0 * std::f64::consts::PI,
            p_max: 8.0,
            p_deriv: PScheme::Fd4,
            dealias: false,
            e: 1.0,
            m: 1.0,
            neutralize: true,
            dt: 1.0 / 256.0,
            t_end: 10.0,
            output_interval: 0.5,
            scenario,
            formulation: Formulation::Density,
            epsilon: 0.05,
            k: 0.5,
            v0: 2.0,
            vt: 1.0,
            chi_amplitude: 0.05,
            chi_k: 0.5,
            out_dir: PathBuf::from("out"),
            snapshots: false,
            paired: false,
        };
        match scenario {
            Scenario::TwoStream => {
                c.epsilon = 1e-3;
                c.k = 0.3;
                c.l_q = 2.0 * std::f64::consts::PI / c.k;
                c.t_end = 30.0;
            }
            Scenario::GaugeDemo => {
                c.formulation = Formulation::Momentum;
                c.paired = true;
            }
            Scenario::TaylorGreen => {
                c.n_p = c.n_q;
                c.l_q = 2.0 * std::f64::consts::PI;
                c.p_max = std::f64::consts::PI;
                c.p_deriv = PScheme::Spectral;
                c.dt = 1e-2;
            }
            _ => {}
        }
        c
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config '{}': {e}", path.display())))?;
        Self::from_ini_str(&text)
    }

    pub fn from_ini_str(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
        for (section, props) in ini.iter() {
            let Some(name) = section else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(Error::Config(format!("key '{k}' outside of any section")));
                }
                continue;
            };
            let Some((_, allowed)) = KEYS.iter().find(|(s, _)| *s == name) else {
                return Err(Error::Config(format!("unknown section [{name}]")));
            };
            for (k, _) in props.iter() {
                if !allowed.contains(&k) {
                    return Err(Error::Config(format!("unknown key '{k}' in [{name}]; valid keys: {}", allowed.join(", "))));
                }
            }
        }
        let get = |s: &str, k: &str| ini.get_from(Some(s), k).map(str::trim);

        let scenario = match get("scenario", "name") {
            Some(s) => s.parse()?,
            None => Scenario::Landau,
        };
        let mut c = RunConfig::defaults(scenario);
        set(&mut c.epsilon, get("scenario", "epsilon"), "scenario.epsilon")?;
        set(&mut c.k, get("scenario", "k"), "scenario.k")?;
        if get("grid", "l_q").is_none() && !scenario.is_fluid() {
            c.l_q = 2.0 * std::f64::consts::PI / c.k;
        }
        set(&mut c.n_q, get("grid", "n_q"), "grid.n_q")?;
        if scenario.is_fluid() {
            c.n_p = c.n_q;
        }
        set(&mut c.n_p, get("grid", "n_p"), "grid.n_p")?;
        set(&mut c.l_q, get("grid", "l_q"), "grid.l_q")?;
        set(&mut c.p_max, get("grid", "p_max"), "grid.p_max")?;
        set(&mut c.p_deriv, get("grid", "p_deriv"), "grid.p_deriv")?;
        set_bool(&mut c.dealias, get("grid", "dealias"), "grid.dealias")?;
        set(&mut c.e, get("physics", "e"), "physics.e")?;
        set(&mut c.m, get("physics", "m"), "physics.m")?;
        set_bool(&mut c.neutralize, get("physics", "neutralize"), "physics.neutralize")?;
        set(&mut c.dt, get("time", "dt"), "time.dt")?;
        set(&mut c.t_end, get("time", "t_end"), "time.t_end")?;
        set(&mut c.output_interval, get("time", "output_interval"), "time.output_interval")?;
        set(&mut c.formulation, get("scenario", "formulation"), "scenario.formulation")?;
        set(&mut c.v0, get("scenario", "v0"), "scenario.v0")?;
        set(&mut c.vt, get("scenario", "vt"), "scenario.vt")?;
        set(&mut c.chi_amplitude, get("scenario", "chi_amplitude"), "scenario.chi_amplitude")?;
        set(&mut c.chi_k, get("scenario", "chi_k"), "scenario.chi_k")?;
        if let Some(d) = get("output", "dir") {
            c.out_dir = PathBuf::from(d);
        }
        set_bool(&mut c.snapshots, get("output", "snapshots"), "output.snapshots")?;
        set_bool(&mut c.paired, get("output", "paired"), "output.paired")?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, v) in [("time.dt", self.dt), ("time.output_interval", self.output_interval)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return bad(format!("time.t_end must be non-negative, got {}", self.t_end));
        }
        if !(self.vt > 0.0) {
            return bad(format!("scenario.vt must be positive, got {}", self.vt));
        }
        if self.scenario.is_fluid() {
            if self.n_q != self.n_p || self.p_deriv != PScheme::Spectral {
                return bad("taylor_green needs a square grid with p_deriv = spectral".into());
            }
        } else if self.scenario == Scenario::GaugeDemo && self.formulation == Formulation::Density {
            return bad("gauge_demo evolves momentum fields; use formulation momentum or canonical".into());
        }
        self.grid_spec().map_err(|e| Error::Config(e.to_string()))?;
        self.physics().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.n_q, self.n_p, self.l_q, self.p_max, self.p_deriv)?.with_dealias(self.dealias))
    }

    pub fn physics(&self) -> Result<PhysParams> {
        PhysParams::new(self.e, self.m, self.neutralize)
    }

    /// The resolved configuration as INI, every key present.
    pub fn to_ini(&self) -> Ini {
        let mut ini = Ini::new();
        ini.with_section(Some("grid"))
            .set("n_q", self.n_q.to_string())
            .set("n_p", self.n_p.to_string())
            .set("l_q", self.l_q.to_string())
            .set("p_max", self.p_max.to_string())
            .set("p_deriv", self.p_deriv.to_string())
            .set("dealias", self.dealias.to_string());
        ini.with_section(Some("physics"))
            .set("e", self.e.to_string())
            .set("m", self.m.to_string())
            .set("neutralize", self.neutralize.to_string());
        ini.with_section(Some("time"))
            .set("dt", self.dt.to_string())
            .set("t_end", self.t_end.to_string())
            .set("output_interval", self.output_interval.to_string());
        ini.with_section(Some("scenario"))
            .set("name", self.scenario.name())
            .set("formulation", self.formulation.to_string())
            .set("epsilon", self.epsilon.to_string())
            .set("k", self.k.to_string())
            .set("v0", self.v0.to_string())
            .set("vt", self.vt.to_string())
            .set("chi_amplitude", self.chi_amplitude.to_string())
            .set("chi_k", self.chi_k.to_string());
        ini.with_section(Some("output"))
            .set("dir", self.out_dir.display().to_string())
            .set("snapshots", self.snapshots.to_string())
            .set("paired", self.paired.to_string());
        ini
    }

    pub fn to_ini_string(&self) -> String {
        let mut buf = Vec::new();
        self.to_ini().write_to(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8")
    }
}

fn set<T: FromStr>(slot: &mut T, raw: Option<&str>, key: &str) -> Result<()> {
    if let Some(s) = raw {
        *slot = s.parse().map_err(|_| Error::Config(format!("invalid value '{s}' for {key}")))?;
    }
    Ok(())
}

fn set_bool(slot: &mut bool, raw: Option<&str>, key: &str) -> Result<()> {
    if let Some(s) = raw {
        *slot = match s.to_ascii_lowercase().as_str() {
            "true" | "yes" | "on" | "1" => true,
            "false" | "no" | "off" | "0" => false,
            _ => return Err(Error::Config(format!("invalid boolean '{s}' for {key}"))),
        };
    }
    Ok(())
}
