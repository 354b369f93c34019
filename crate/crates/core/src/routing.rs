//! Nonreciprocity metrics and router classification.
//!
//! A router has one transmitter, one receiver and two terminals. Signals flow
//! transmitter → terminals → receiver → transmitter and never backwards. In
//! the plaquette the two optical ports (1, 2) play transmitter and receiver
//! and the two mechanical ports (3, 4) are the terminals.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::build_dynamics_matrix;
use crate::model::LinearizedSystem;
use crate::scattering::{scattering_matrix, ScatteringResult};
use crate::{Error, Result};

/// Below this a probability is treated as exactly zero.
pub const UNDERFLOW: f64 = 1e-300;

/// Forward/backward ratio `S_ij / S_ji` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isolation {
    pub db: f64,
    /// Set when either probability underflowed; `db` is then `±∞` (or NaN if
    /// both did).
    pub saturated: bool,
}

/// `10 log₁₀(S_ij / S_ji)` for 1-based ports.
pub fn isolation_db(s: &ScatteringResult, i: usize, j: usize) -> Isolation {
    isolation_from(s.prob(i, j), s.prob(j, i))
}

pub fn isolation_from(forward: f64, backward: f64) -> Isolation {
    match (forward < UNDERFLOW, backward < UNDERFLOW) {
        (false, false) => Isolation {
            // A difference of logs keeps the swap exactly antisymmetric.
            db: 10.0 * (forward.log10() - backward.log10()),
            saturated: false,
        },
        (false, true) => Isolation {
            db: f64::INFINITY,
            saturated: true,
        },
        (true, false) => Isolation {
            db: f64::NEG_INFINITY,
            saturated: true,
        },
        (true, true) => Isolation {
            db: f64::NAN,
            saturated: true,
        },
    }
}

/// Which optical port acts as transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `a₁` transmits, `a₂` receives.
    A,
    /// `a₂` transmits, `a₁` receives.
    B,
}

impl Orientation {
    pub fn transmitter(self) -> usize {
        match self {
            Orientation::A => 1,
            Orientation::B => 2,
        }
    }

    pub fn receiver(self) -> usize {
        3 - self.transmitter()
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::A => Orientation::B,
            Orientation::B => Orientation::A,
        }
    }

    /// Paths that must be suppressed, as `(to, from)`.
    pub fn inhibited_paths(self) -> [(usize, usize); 5] {
        let (t, r) = (self.transmitter(), self.receiver());
        [(r, t), (t, 3), (t, 4), (3, r), (4, r)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCheck {
    pub to: usize,
    pub from: usize,
    pub value: f64,
    pub threshold: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingVerdict {
    pub orientation: Orientation,
    pub transmitter: usize,
    pub receiver: usize,
    pub terminals: [usize; 2],
    /// Suppressed paths (must be ≤ `low`).
    pub inhibited: Vec<PathCheck>,
    /// Required paths (must reach their threshold).
    pub required: Vec<PathCheck>,
    /// Transmitter → terminals one-way.
    pub transmitter_to_terminals: bool,
    /// Terminals → receiver one-way.
    pub terminals_to_receiver: bool,
    /// Receiver → transmitter one-way.
    pub receiver_to_transmitter: bool,
    pub passed: bool,
    pub thresholds: (f64, f64),
}

impl RoutingVerdict {
    fn failures(&self) -> usize {
        self.inhibited
            .iter()
            .chain(&self.required)
            .filter(|c| !c.ok)
            .count()
    }
}

pub const DEFAULT_HIGH: f64 = 0.4;
pub const DEFAULT_LOW: f64 = 0.05;

fn evaluate(s: &ScatteringResult, o: Orientation, high: f64, low: f64) -> RoutingVerdict {
    let (t, r) = (o.transmitter(), o.receiver());
    let low_check = |to, from| {
        let value = s.prob(to, from);
        PathCheck {
            to,
            from,
            value,
            threshold: low,
            ok: value <= low,
        }
    };
    let high_check = |to, from, threshold: f64| {
        let value = s.prob(to, from);
        PathCheck {
            to,
            from,
            value,
            threshold,
            ok: value >= threshold,
        }
    };

    let out_fwd = [high_check(3, t, high), high_check(4, t, high)];
    let out_back = [low_check(t, 3), low_check(t, 4)];
    let in_fwd = [high_check(r, 3, high), high_check(r, 4, high)];
    let in_back = [low_check(3, r), low_check(4, r)];
    let loop_fwd = high_check(t, r, 2.0 * high);
    let loop_back = low_check(r, t);

    let all_ok = |cs: &[PathCheck]| cs.iter().all(|c| c.ok);
    let transmitter_to_terminals = all_ok(&out_fwd) && all_ok(&out_back);
    let terminals_to_receiver = all_ok(&in_fwd) && all_ok(&in_back);
    let receiver_to_transmitter = loop_fwd.ok && loop_back.ok;

    let inhibited = o
        .inhibited_paths()
        .iter()
        .map(|&(to, from)| low_check(to, from))
        .collect();
    let mut required = Vec::with_capacity(5);
    required.push(loop_fwd);
    required.extend_from_slice(&out_fwd);
    required.extend_from_slice(&in_fwd);

    RoutingVerdict {
        orientation: o,
        transmitter: t,
        receiver: r,
        terminals: [3, 4],
        inhibited,
        required,
        transmitter_to_terminals,
        terminals_to_receiver,
        receiver_to_transmitter,
        passed: transmitter_to_terminals && terminals_to_receiver && receiver_to_transmitter,
        thresholds: (high, low),
    }
}

/// Tests both router orientations against `(high, low)` thresholds.
///
/// Returns the passing orientation, or the closer one with `passed = false`.
pub fn classify_direction(s: &ScatteringResult, high: f64, low: f64) -> Result<RoutingVerdict> {
    if !(0.0 <= low && low < high && high <= 1.0) {
        return Err(Error::invalid(
            "high",
            "thresholds must satisfy 0 <= low < high <= 1",
        ));
    }
    let a = evaluate(s, Orientation::A, high, low);
    let b = evaluate(s, Orientation::B, high, low);
    match (a.passed, b.passed) {
        (true, true) => Err(Error::Ambiguous),
        (true, false) => Ok(a),
        (false, true) => Ok(b),
        (false, false) => Ok(if b.failures() < a.failures() { b } else { a }),
    }
}

/// The regime factors used to judge "≫" and "=" in the optimal conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeFactors {
    /// `x ≫ y` means `x ≥ much_greater · y`.
    pub much_greater: f64,
    /// `x = y` means `|x − y| ≤ equal_rel · |y|`.
    pub equal_rel: f64,
}

impl Default for RegimeFactors {
    fn default() -> Self {
        RegimeFactors {
            much_greater: 10.0,
            equal_rel: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeStatus {
    Satisfied,
    /// Missed the declared factor, but by less than another 10×.
    Marginal,
    /// Missed by more than 10× the declared factor.
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCheck {
    pub condition: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub status: RegimeStatus,
}

fn much_greater(condition: &'static str, x: f64, y: f64, f: &RegimeFactors) -> RegimeCheck {
    let status = if x >= f.much_greater * y {
        RegimeStatus::Satisfied
    } else if x >= f.much_greater * y / 10.0 {
        RegimeStatus::Marginal
    } else {
        RegimeStatus::Violated
    };
    RegimeCheck {
        condition,
        lhs: x,
        rhs: y,
        status,
    }
}

fn approx_equal(condition: &'static str, x: f64, y: f64, f: &RegimeFactors) -> RegimeCheck {
    let dev = (x - y).abs();
    let status = if dev <= f.equal_rel * x.abs().max(y.abs()) {
        RegimeStatus::Satisfied
    } else if dev <= 10.0 * f.equal_rel * x.abs().min(y.abs()) {
        RegimeStatus::Marginal
    } else {
        RegimeStatus::Violated
    };
    RegimeCheck {
        condition,
        lhs: x,
        rhs: y,
        status,
    }
}

/// Checks `ω_m ≫ κ = 2J_c ≫ J_m ≫ γ`, `G² = J_c γ ≪ κ J_m`, `ω₁ = ω₂`,
/// `Δⱼ = ωⱼ`, `G₁ = G₂`.
///
/// `ω_m ≫ κ` needs the absolute mechanical frequency, which is only known
/// when the system carries a nonzero `frame_ref`; it is skipped otherwise.
pub fn regime_checks(lin: &LinearizedSystem, f: &RegimeFactors) -> Vec<RegimeCheck> {
    let kappa = lin.kappa();
    let gamma = lin.gamma();
    let g_sq = lin.coupling[0] * lin.coupling[1];
    let mut out = Vec::new();
    if lin.frame_ref != 0.0 {
        out.push(much_greater(
            "omega_m >> kappa",
            lin.omega_m() + lin.frame_ref,
            kappa,
            f,
        ));
    }
    out.push(approx_equal("kappa = 2 J_c", kappa, 2.0 * lin.j_c, f));
    out.push(much_greater("kappa >> J_m", kappa, lin.j_m, f));
    out.push(much_greater("J_m >> gamma", lin.j_m, gamma, f));
    out.push(approx_equal("G^2 = J_c gamma", g_sq, lin.j_c * gamma, f));
    out.push(much_greater("kappa J_m >> G^2", kappa * lin.j_m, g_sq, f));
    out.push(approx_equal(
        "G_1 = G_2",
        lin.coupling[0],
        lin.coupling[1],
        f,
    ));
    let width = gamma.max(f64::MIN_POSITIVE);
    // Frequency equalities are judged on the scale of the mechanical linewidth.
    let freq_eq = |condition, x: f64, y: f64| {
        let dev = (x - y).abs();
        let status = if dev <= f.equal_rel * width {
            RegimeStatus::Satisfied
        } else if dev <= 10.0 * f.equal_rel * width {
            RegimeStatus::Marginal
        } else {
            RegimeStatus::Violated
        };
        RegimeCheck {
            condition,
            lhs: x,
            rhs: y,
            status,
        }
    };
    out.push(freq_eq("omega_1 = omega_2", lin.omega[0], lin.omega[1]));
    out.push(freq_eq("Delta_1 = omega_1", lin.delta[0], lin.omega[0]));
    out.push(freq_eq("Delta_2 = omega_2", lin.delta[1], lin.omega[1]));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub flux: f64,
    /// Probe frequency in the stored frame.
    pub omega: f64,
    /// `+1` for `ω_m + J_m`, `−1` for `ω_m − J_m`.
    pub sideband: i8,
    /// The orientation this cell should realize.
    pub expected: Orientation,
    pub inhibited: Vec<PathCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Report {
    /// Rows: `Φ = π/2`, `3π/2`. Columns: `ω_m − J_m`, `ω_m + J_m`.
    pub cells: [[Table1Cell; 2]; 2],
    pub regime: Vec<RegimeCheck>,
    pub tol_low: f64,
}

impl Table1Report {
    pub fn passed(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.passed)
    }

    /// Regime conditions missed by more than 10× the declared factors.
    pub fn violations(&self) -> impl Iterator<Item = &RegimeCheck> {
        self.regime
            .iter()
            .filter(|c| c.status == RegimeStatus::Violated)
    }
}

/// Default suppression threshold for "≈ 0".
pub const TABLE1_TOL_LOW: f64 = 0.01;

/// Evaluates the inhibited paths of every `(Φ, ω)` cell of the regime map.
pub fn table1_check(base: &LinearizedSystem, tol_low: f64) -> Result<Table1Report> {
    table1_check_with(base, tol_low, &RegimeFactors::default())
}

pub fn table1_check_with(
    base: &LinearizedSystem,
    tol_low: f64,
    factors: &RegimeFactors,
) -> Result<Table1Report> {
    base.validate()?;
    let omega_m = base.omega_m();
    let cell = |flux: f64, sideband: i8| -> Result<Table1Cell> {
        let lin = base.with_flux(flux);
        let omega = omega_m + f64::from(sideband) * lin.j_m;
        let s = scattering_matrix(&build_dynamics_matrix(&lin), omega)?;
        // Φ = π/2 with ω_m − J_m realizes a₁ → terminals → a₂ → a₁; flipping
        // either the flux or the sideband reverses it.
        let lower = sideband < 0;
        let quarter = (flux - FRAC_PI_2).abs() < (flux - 1.5 * PI).abs();
        let expected = if lower == quarter {
            Orientation::A
        } else {
            Orientation::B
        };
        let inhibited: Vec<PathCheck> = expected
            .inhibited_paths()
            .iter()
            .map(|&(to, from)| {
                let value = s.prob(to, from);
                PathCheck {
                    to,
                    from,
                    value,
                    threshold: tol_low,
                    ok: value <= tol_low,
                }
            })
            .collect();
        let passed = inhibited.iter().all(|c| c.ok);
        Ok(Table1Cell {
            flux,
            omega,
            sideband,
            expected,
            inhibited,
            passed,
        })
    };
    let cells = [
        [cell(FRAC_PI_2, -1)?, cell(FRAC_PI_2, 1)?],
        [cell(1.5 * PI, -1)?, cell(1.5 * PI, 1)?],
    ];
    Ok(Table1Report {
        cells,
        regime: regime_checks(base, factors),
        tol_low,
    })
}

/// The optimal operating point: `κ_e = κ = 2J_c`, `G₁ = G₂ = √(J_c γ)`,
/// lossless, all frequencies degenerate at `ω_m` (stored as 0).
pub fn optimal_preset(j_c: f64, gamma: f64, j_m: f64, flux: f64) -> Result<LinearizedSystem> {
    for (name, v) in [("J_c", j_c), ("gamma", gamma), ("J_m", j_m)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(name, "must be positive"));
        }
    }
    if !flux.is_finite() {
        return Err(Error::invalid("flux", "must be finite"));
    }
    let g = (j_c * gamma).sqrt();
    LinearizedSystem::direct(
        [0.0; 2],
        [0.0; 2],
        [g, g],
        [0.0, flux],
        j_c,
        j_m,
        (2.0 * j_c, 0.0),
        (gamma, 0.0),
    )
}
