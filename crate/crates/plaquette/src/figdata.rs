//! Built-in parameter sets for the reference figures.
//!
//! Every preset starts from the optimal operating point with `J_c = 500`,
//! `J_m = 10`, `γ_e = 1` (rates in units of `γ`), lossless, `Φ = π/2`, in the
//! frame where `ω_m = 0`. Non-frequency sweeps probe at `ω − ω_m = −J_m`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::{Path, PathBuf};

use plaquette_core::dynamics::{build_dynamics_matrix, to_normal_mode, Basis};
use plaquette_core::model::LinearizedSystem;
use plaquette_core::routing::optimal_preset;
use plaquette_core::scattering::scattering_matrix;
use plaquette_core::sweep::{Axis, Grid, SweepSpec, SweepTable};

use crate::csv::{self, Metadata};
use crate::parallel;
use crate::Result;

pub const J_C: f64 = 500.0;
pub const J_M: f64 = 10.0;
pub const GAMMA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig2a,
    Fig2bc,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5ab,
}

impl Figure {
    pub const ALL: [Figure; 9] = [
        Figure::Fig2a,
        Figure::Fig2bc,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig3c,
        Figure::Fig4a,
        Figure::Fig4b,
        Figure::Fig4c,
        Figure::Fig5ab,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2bc => "fig2bc",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig3c => "fig3c",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig4c => "fig4c",
            Figure::Fig5ab => "fig5ab",
        }
    }

    pub fn from_name(name: &str) -> Option<Figure> {
        Figure::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// One table destined for one file.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub file_name: String,
    pub table: SweepTable,
    pub meta: Metadata,
    pub lossless: Vec<bool>,
}

/// The base operating point with flux `flux`.
pub fn base(flux: f64) -> LinearizedSystem {
    optimal_preset(J_C, GAMMA, J_M, flux).expect("preset constants are valid")
}

/// Sweep behind each single-table figure.
pub fn sweep_spec(fig: Figure) -> Option<SweepSpec> {
    let g_opt = (J_C * GAMMA).sqrt();
    let (axis, start, stop) = match fig {
        Figure::Fig2a => (Axis::Frequency, -3.0 * J_M, 3.0 * J_M),
        Figure::Fig3a => (Axis::Flux, 0.0, TAU),
        Figure::Fig3b => (Axis::CouplingG, 0.0, 3.0 * g_opt),
        Figure::Fig3c => (Axis::KappaOverJc, 0.5, 4.0),
        Figure::Fig4a => (Axis::MechDetuning, -5.0 * GAMMA, 5.0 * GAMMA),
        Figure::Fig4b => (Axis::Kappa0Ratio, 0.0, 1.0),
        Figure::Fig4c => (Axis::Gamma0Ratio, 0.0, 1.0),
        Figure::Fig2bc | Figure::Fig5ab => return None,
    };
    Some(SweepSpec {
        base: base(FRAC_PI_2),
        axis,
        grid: Grid::new(start, stop, axis.default_points()).expect("preset grid is valid"),
        probe: -J_M,
        basis: Basis::Bare,
    })
}

fn note(fig: Figure) -> Option<&'static str> {
    match fig {
        Figure::Fig3b => Some("G range [0, 3 sqrt(J_c gamma)] chosen to bracket the S21 dip"),
        Figure::Fig3c => Some("kappa_e = kappa, kappa_0 = 0, G = sqrt(J_c gamma) along the sweep"),
        Figure::Fig4a => Some("omega_1,2 = omega_m +/- delta/2 with omega_m fixed"),
        Figure::Fig4b | Figure::Fig4c => Some("G = sqrt(J_c gamma_e) held fixed"),
        _ => None,
    }
}

fn describe(spec: &SweepSpec) -> String {
    let b = &spec.base;
    format!(
        "J_c={} J_m={} kappa_e={} kappa_0={} gamma_e={} gamma_0={} G=({}, {}) phi=({}, {}) \
         Delta=({}, {}) omega=({}, {}) grid=[{}, {}] points={} probe={}",
        b.j_c,
        b.j_m,
        b.kappa_e,
        b.kappa_0,
        b.gamma_e,
        b.gamma_0,
        b.coupling[0],
        b.coupling[1],
        b.phase[0],
        b.phase[1],
        b.delta[0],
        b.delta[1],
        b.omega[0],
        b.omega[1],
        spec.grid.start,
        spec.grid.stop,
        spec.grid.points,
        spec.probe
    )
}

fn from_sweep(
    fig: Figure,
    file_name: String,
    spec: &SweepSpec,
    threads: usize,
) -> Result<FigureTable> {
    let table = parallel::run_sweep(spec, threads)?;
    let mut meta = Metadata::standard(&table);
    meta.push("figure", fig.name())
        .push("unit", "gamma")
        .push("frame", "frequencies are omega - omega_m")
        .push("parameters", describe(spec));
    if let Some(n) = note(fig) {
        meta.push("note", n);
    }
    Ok(FigureTable {
        file_name,
        lossless: parallel::lossless_rows(spec),
        table,
        meta,
    })
}

/// Single-row table of `S` at one probe frequency.
fn point_table(lin: &LinearizedSystem, omega: f64, basis: Basis) -> Result<SweepTable> {
    let bare = build_dynamics_matrix(lin);
    let d = match basis {
        Basis::Bare => bare,
        Basis::Normal => to_normal_mode(&bare)?,
    };
    let r = scattering_matrix(&d, omega)?;
    Ok(SweepTable {
        axis: Axis::Frequency,
        basis,
        axis_values: vec![omega],
        s: vec![r.flat()],
    })
}

/// Computes every table of a figure without touching the filesystem.
pub fn generate(fig: Figure, threads: usize) -> Result<Vec<FigureTable>> {
    if let Some(spec) = sweep_spec(fig) {
        return Ok(vec![from_sweep(
            fig,
            format!("{}.csv", fig.name()),
            &spec,
            threads,
        )?]);
    }
    match fig {
        Figure::Fig2bc => {
            let lin = base(FRAC_PI_2);
            [("fig2b.csv", -J_M), ("fig2c.csv", J_M)]
                .into_iter()
                .map(|(name, omega)| {
                    let table = point_table(&lin, omega, Basis::Bare)?;
                    let mut meta = Metadata::standard(&table);
                    meta.push("figure", fig.name())
                        .push("unit", "gamma")
                        .push("frame", "frequencies are omega - omega_m")
                        .push("omega", format!("{omega}"));
                    Ok(FigureTable {
                        file_name: name.to_string(),
                        table,
                        meta,
                        lossless: vec![true],
                    })
                })
                .collect()
        }
        Figure::Fig5ab => [("fig5a.csv", FRAC_PI_2), ("fig5b.csv", 1.5 * PI)]
            .into_iter()
            .map(|(name, flux)| {
                let spec = SweepSpec {
                    base: base(flux),
                    axis: Axis::Frequency,
                    grid: Grid::new(-3.0 * J_M, 3.0 * J_M, Axis::Frequency.default_points())?,
                    probe: 0.0,
                    basis: Basis::Normal,
                };
                from_sweep(fig, name.to_string(), &spec, threads)
            })
            .collect(),
        _ => unreachable!("single-sweep figures handled above"),
    }
}

/// Writes the figure's CSV files into `outdir`; returns paths and warnings.
pub fn write_figure(
    fig: Figure,
    outdir: &Path,
    threads: usize,
) -> Result<(Vec<PathBuf>, Vec<String>)> {
    std::fs::create_dir_all(outdir).map_err(|e| crate::Error::io(outdir, e))?;
    let mut paths = Vec::new();
    let mut warnings = Vec::new();
    for t in generate(fig, threads)? {
        warnings.extend(csv::check_table(&t.table, &t.lossless)?);
        let path = outdir.join(&t.file_name);
        csv::write_table(&path, &t.table, &t.meta)?;
        paths.push(path);
    }
    Ok((paths, warnings))
}
