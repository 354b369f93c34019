//! Strict JSON configuration.
//!
//! ```json
//! {
//!   "unit": "gamma",
//!   "system": { "linearized": { "Delta_1": 0, "Delta_2": 0, "omega_1": 0, "omega_2": 0,
//!                               "G_1": 22.36, "G_2": 22.36, "phi_1": 0, "phi_2": 1.5708,
//!                               "J_c": 500, "J_m": 10, "kappa_e": 1000, "kappa_0": 0,
//!                               "gamma_e": 1, "gamma_0": 0 } },
//!   "sweep": { "axis": "frequency", "start": -30, "stop": 30, "points": 401, "probe_omega": -10 },
//!   "basis": "bare",
//!   "output": { "path": "fig2a.csv" }
//! }
//! ```
//!
//! `system` may instead be `{"physical": {...}}` with the full parameter set and
//! `"solve": true`. Unknown keys anywhere are rejected.
//!
//! After loading, every system is moved to the frame rotating at the mean
//! mechanical frequency `ω_m`. All frequencies on the command line and in the
//! `sweep` section are therefore offsets `ω − ω_m`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use plaquette_core::dynamics::Basis;
use plaquette_core::model::{
    linearize, solve_steady_state, LinearizedSystem, PlaquetteParams, RwaWarning, SolverOptions,
    SteadyState,
};
use plaquette_core::sweep::{Axis, Grid, SweepSpec};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub system: SystemFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemFile {
    Linearized(LinearizedFile),
    Physical(PhysicalFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearizedFile {
    #[serde(rename = "Delta_1")]
    pub delta_1: f64,
    #[serde(rename = "Delta_2")]
    pub delta_2: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    #[serde(rename = "G_1")]
    pub g_1: f64,
    #[serde(rename = "G_2")]
    pub g_2: f64,
    pub phi_1: f64,
    pub phi_2: f64,
    #[serde(rename = "J_c")]
    pub j_c: f64,
    #[serde(rename = "J_m")]
    pub j_m: f64,
    pub kappa_e: f64,
    pub kappa_0: f64,
    pub gamma_e: f64,
    pub gamma_0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalFile {
    pub omega_1: f64,
    pub omega_2: f64,
    pub delta0_1: f64,
    pub delta0_2: f64,
    pub g_1: f64,
    pub g_2: f64,
    #[serde(rename = "J_c")]
    pub j_c: f64,
    #[serde(rename = "J_m")]
    pub j_m: f64,
    pub kappa_e: f64,
    pub kappa_0: f64,
    pub gamma_e: f64,
    pub gamma_0: f64,
    pub eps_1: f64,
    pub eps_2: f64,
    pub varphi_1: f64,
    pub varphi_2: f64,
    pub solve: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub axis: String,
    pub start: f64,
    pub stop: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisName {
    Bare,
    Normal,
}

impl From<BasisName> for Basis {
    fn from(b: BasisName) -> Self {
        match b {
            BasisName::Bare => Basis::Bare,
            BasisName::Normal => Basis::Normal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Linearized(LinearizedSystem),
    Physical {
        params: PlaquetteParams,
        options: SolverOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSection {
    pub axis: Axis,
    pub grid: Grid,
    /// `None` only for the frequency axis.
    pub probe: Option<f64>,
}

/// A parsed and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub unit: String,
    pub system: SystemSpec,
    pub sweep: Option<SweepSection>,
    pub basis: Basis,
    pub output: Option<PathBuf>,
    /// Compact canonical JSON of the file as parsed.
    pub echo: String,
}

/// Linearized system ready for evaluation, in the `ω_m = 0` frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub system: LinearizedSystem,
    pub steady: Option<SteadyState>,
    pub warnings: Vec<RwaWarning>,
}

pub fn parse_config(text: &str) -> Result<Config> {
    let file: ConfigFile = serde_json::from_str(text)?;
    Config::from_file(file)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

impl Config {
    pub fn from_file(file: ConfigFile) -> Result<Config> {
        let unit = file.unit.clone().unwrap_or_else(|| "gamma".to_string());
        let system = match &file.system {
            SystemFile::Linearized(l) => SystemSpec::Linearized(linearized_from(l)?),
            SystemFile::Physical(p) => physical_from(p, &unit)?,
        };
        let sweep = file.sweep.as_ref().map(sweep_from).transpose()?;
        let echo = serde_json::to_string(&file).expect("config serializes");
        Ok(Config {
            unit,
            system,
            sweep,
            basis: file.basis.map_or(Basis::Bare, Basis::from),
            output: file.output.map(|o| o.path),
            echo,
        })
    }

    /// Solves the steady state if needed and shifts to the `ω_m = 0` frame.
    pub fn prepare(&self) -> Result<Prepared> {
        let (lin, steady, warnings) = match &self.system {
            SystemSpec::Linearized(lin) => (*lin, None, Vec::new()),
            SystemSpec::Physical { params, options } => {
                let steady = solve_steady_state(params, *options)?;
                let out = linearize(params, &steady);
                (out.system, Some(steady), out.warnings)
            }
        };
        Ok(Prepared {
            system: lin.shifted(lin.omega_m()),
            steady,
            warnings,
        })
    }

    /// The sweep described by the config, over `prepared.system`.
    pub fn sweep_spec(&self, prepared: &Prepared) -> Result<SweepSpec> {
        let section = self
            .sweep
            .ok_or_else(|| Error::validation("sweep", "config has no sweep section"))?;
        let spec = SweepSpec {
            base: prepared.system,
            axis: section.axis,
            grid: section.grid,
            probe: section.probe.unwrap_or(0.0),
            basis: self.basis,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn linearized_from(l: &LinearizedFile) -> Result<LinearizedSystem> {
    let mut lin = LinearizedSystem::direct(
        [l.delta_1, l.delta_2],
        [l.omega_1, l.omega_2],
        [l.g_1, l.g_2],
        [l.phi_1, l.phi_2],
        l.j_c,
        l.j_m,
        (l.kappa_e, l.kappa_0),
        (l.gamma_e, l.gamma_0),
    )?;
    if let Some(f) = l.frame_ref {
        if !f.is_finite() {
            return Err(Error::validation("frame_ref", "must be finite"));
        }
        lin.frame_ref = f;
    }
    Ok(lin)
}

fn physical_from(p: &PhysicalFile, unit: &str) -> Result<SystemSpec> {
    if !p.solve {
        return Err(Error::validation(
            "solve",
            "physical systems are always solved; set it to true",
        ));
    }
    let params = PlaquetteParams {
        omega: [p.omega_1, p.omega_2],
        delta0: [p.delta0_1, p.delta0_2],
        g: [p.g_1, p.g_2],
        j_c: p.j_c,
        j_m: p.j_m,
        kappa_e: p.kappa_e,
        kappa_0: p.kappa_0,
        gamma_e: p.gamma_e,
        gamma_0: p.gamma_0,
        eps: [p.eps_1, p.eps_2],
        varphi: [p.varphi_1, p.varphi_2],
        unit: unit.to_string(),
    };
    params.validate()?;
    let defaults = SolverOptions::default();
    let options = SolverOptions {
        tol: p.tol.unwrap_or(defaults.tol),
        max_iter: p.max_iter.unwrap_or(defaults.max_iter),
        damping: p.damping.unwrap_or(defaults.damping),
    };
    if !(options.tol > 0.0) {
        return Err(Error::validation("tol", "must be positive"));
    }
    if options.max_iter == 0 {
        return Err(Error::validation("max_iter", "must be at least 1"));
    }
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return Err(Error::validation("damping", "must lie in (0, 1]"));
    }
    Ok(SystemSpec::Physical { params, options })
}

fn sweep_from(s: &SweepFile) -> Result<SweepSection> {
    let axis = Axis::from_name(&s.axis).ok_or_else(|| {
        let names: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
        Error::validation("axis", format!("expected one of {}", names.join(", ")))
    })?;
    let points = s.points.unwrap_or(axis.default_points());
    let grid = Grid::new(s.start, s.stop, points)?;
    let probe = match (axis, s.probe_omega) {
        (_, Some(p)) if !p.is_finite() => {
            return Err(Error::validation("probe_omega", "must be finite"));
        }
        (Axis::Frequency, p) => p,
        (_, Some(p)) => Some(p),
        (_, None) => {
            return Err(Error::validation(
                "probe_omega",
                "required for every axis except frequency",
            ));
        }
    };
    Ok(SweepSection { axis, grid, probe })
}
