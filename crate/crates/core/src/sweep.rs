//! Declarative one-parameter sweeps.
//!
//! Several axes move correlated parameters together, following the optimal
//! operating conditions:
//!
//! | axis            | swept value          | also set                          |
//! |-----------------|----------------------|-----------------------------------|
//! | `Flux`          | `Φ`                  | `ϕ₂ = ϕ₁ + Φ`                     |
//! | `CouplingG`     | `G`                  | `G₁ = G₂ = G`                     |
//! | `KappaOverJc`   | `κ / J_c`            | `κ_e = κ`, `κ₀ = 0`, `G = √(J_c γ)` |
//! | `MechDetuning`  | `δ = ω₁ − ω₂`        | `ω_m` held fixed                  |
//! | `Kappa0Ratio`   | `κ₀ / κ_e`           | `G = √(J_c γ_e)`                  |
//! | `Gamma0Ratio`   | `γ₀ / γ_e`           | `G = √(J_c γ_e)`                  |
//! | `Frequency`     | `ω`                  | probe frequency                   |

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{build_dynamics_matrix, stability_report, to_normal_mode, Basis};
use crate::model::LinearizedSystem;
use crate::scattering::scattering_matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Flux,
    CouplingG,
    KappaOverJc,
    MechDetuning,
    Kappa0Ratio,
    Gamma0Ratio,
    Frequency,
}

impl Axis {
    pub const ALL: [Axis; 7] = [
        Axis::Flux,
        Axis::CouplingG,
        Axis::KappaOverJc,
        Axis::MechDetuning,
        Axis::Kappa0Ratio,
        Axis::Gamma0Ratio,
        Axis::Frequency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Flux => "flux",
            Axis::CouplingG => "coupling_g",
            Axis::KappaOverJc => "kappa_over_jc",
            Axis::MechDetuning => "mech_detuning",
            Axis::Kappa0Ratio => "kappa0_ratio",
            Axis::Gamma0Ratio => "gamma0_ratio",
            Axis::Frequency => "frequency",
        }
    }

    pub fn from_name(name: &str) -> Option<Axis> {
        Axis::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Default number of grid points.
    pub fn default_points(self) -> usize {
        match self {
            Axis::Frequency => 401,
            _ => 201,
        }
    }

    /// The system at axis value `x`. The probe frequency is untouched.
    pub fn apply(self, base: &LinearizedSystem, x: f64) -> LinearizedSystem {
        let mut lin = *base;
        match self {
            Axis::Flux => lin.phase[1] = lin.phase[0] + x,
            Axis::CouplingG => lin.coupling = [x, x],
            Axis::KappaOverJc => {
                lin.kappa_e = x * lin.j_c;
                lin.kappa_0 = 0.0;
                let g = (lin.j_c * lin.gamma()).sqrt();
                lin.coupling = [g, g];
            }
            Axis::MechDetuning => {
                let mean = base.omega_m();
                lin.omega = [mean + x / 2.0, mean - x / 2.0];
            }
            Axis::Kappa0Ratio => {
                lin.kappa_0 = x * lin.kappa_e;
                let g = (lin.j_c * lin.gamma_e).sqrt();
                lin.coupling = [g, g];
            }
            Axis::Gamma0Ratio => {
                lin.gamma_0 = x * lin.gamma_e;
                let g = (lin.j_c * lin.gamma_e).sqrt();
                lin.coupling = [g, g];
            }
            Axis::Frequency => {}
        }
        lin
    }
}

/// Linearly spaced grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        let g = Grid {
            start,
            stop,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidGrid("endpoints must be finite"));
        }
        if !(self.start < self.stop) {
            return Err(Error::InvalidGrid("start must be below stop"));
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid("at least two points are required"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.points - 1) as f64
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            return self.stop;
        }
        self.start + (self.stop - self.start) * (k as f64) / ((self.points - 1) as f64)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.value(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub base: LinearizedSystem,
    pub axis: Axis,
    pub grid: Grid,
    /// Probe frequency for every axis except [`Axis::Frequency`].
    pub probe: f64,
    pub basis: Basis,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.grid.validate()?;
        if self.axis != Axis::Frequency && !self.probe.is_finite() {
            return Err(Error::invalid("probe_omega", "must be finite"));
        }
        Ok(())
    }

    /// System and probe frequency at grid index `k`.
    pub fn point(&self, k: usize) -> (LinearizedSystem, f64) {
        let x = self.grid.value(k);
        let lin = self.axis.apply(&self.base, x);
        let omega = if self.axis == Axis::Frequency {
            x
        } else {
            self.probe
        };
        (lin, omega)
    }

    /// Row-major `S11 … S44` at grid index `k`, after a stability check.
    pub fn evaluate(&self, k: usize) -> Result<[f64; 16]> {
        let (lin, omega) = self.point(k);
        let at = |e: Error| match e {
            Error::UnstablePoint { .. } => e,
            other => Error::AtGridPoint {
                index: k,
                source: alloc::boxed::Box::new(other),
            },
        };
        lin.validate().map_err(at)?;
        let bare = build_dynamics_matrix(&lin);
        let d = match self.basis {
            Basis::Bare => bare,
            Basis::Normal => to_normal_mode(&bare).map_err(at)?,
        };
        let report = stability_report(&bare).map_err(at)?;
        if !report.stable {
            return Err(Error::UnstablePoint {
                index: k,
                min_re: report.min_real(),
            });
        }
        Ok(scattering_matrix(&d, omega).map_err(at)?.flat())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    pub basis: Basis,
    pub axis_values: Vec<f64>,
    /// One row per grid point: `S11 … S44` row-major by `(i, j)`.
    pub s: Vec<[f64; 16]>,
}

impl SweepTable {
    /// `S_ij` column (1-based ports).
    pub fn column(&self, i: usize, j: usize) -> impl Iterator<Item = f64> + '_ {
        let idx = 4 * (i - 1) + (j - 1);
        self.s.iter().map(move |row| row[idx])
    }

    pub fn len(&self) -> usize {
        self.axis_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis_values.is_empty()
    }

    /// Index of the smallest `S_ij` (first one on ties).
    pub fn argmin(&self, i: usize, j: usize) -> Option<usize> {
        self.column(i, j)
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (k, v)| match best {
                Some((_, b)) if b <= v => best,
                _ => Some((k, v)),
            })
            .map(|(k, _)| k)
    }

    /// Index of the largest `S_ij` (first one on ties).
    pub fn argmax(&self, i: usize, j: usize) -> Option<usize> {
        self.column(i, j)
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (k, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((k, v)),
            })
            .map(|(k, _)| k)
    }
}

/// Runs the sweep serially in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let s = (0..spec.grid.points)
        .map(|k| spec.evaluate(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis: spec.axis,
        basis: spec.basis,
        axis_values: spec.grid.values(),
        s,
    })
}
