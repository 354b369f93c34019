//! Physical parameters, classical steady state, and linearization.
//!
//! All rates are dimensionless multiples of a reference rate (typically the
//! mechanical decay `γ`). The reference is carried as a label only.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::linalg::solve2;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Full parameter set of the driven plaquette, in the frame rotating with the
/// two pumps.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaquetteParams {
    /// Mechanical resonance frequencies `ω₁`, `ω₂`.
    pub omega: [f64; 2],
    /// Bare pump detunings `Δ₀,ⱼ = ω_c,j − ω_p,j`.
    pub delta0: [f64; 2],
    /// Single-photon optomechanical couplings `g₁`, `g₂`.
    pub g: [f64; 2],
    pub j_c: f64,
    pub j_m: f64,
    pub kappa_e: f64,
    pub kappa_0: f64,
    pub gamma_e: f64,
    pub gamma_0: f64,
    /// Pump amplitudes `εⱼ ≥ 0`.
    pub eps: [f64; 2],
    /// Pump phases `φⱼ` (radians).
    pub varphi: [f64; 2],
    /// Name of the reference rate (metadata only).
    pub unit: String,
}

impl PlaquetteParams {
    pub fn kappa(&self) -> f64 {
        self.kappa_e + self.kappa_0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_e + self.gamma_0
    }

    pub fn validate(&self) -> Result<()> {
        let non_negative: [(&'static str, f64); 10] = [
            ("g_1", self.g[0]),
            ("g_2", self.g[1]),
            ("J_c", self.j_c),
            ("J_m", self.j_m),
            ("kappa_e", self.kappa_e),
            ("kappa_0", self.kappa_0),
            ("gamma_e", self.gamma_e),
            ("gamma_0", self.gamma_0),
            ("eps_1", self.eps[0]),
            ("eps_2", self.eps[1]),
        ];
        for (name, v) in non_negative {
            check_rate(name, v)?;
        }
        let finite: [(&'static str, f64); 6] = [
            ("omega_1", self.omega[0]),
            ("omega_2", self.omega[1]),
            ("delta0_1", self.delta0[0]),
            ("delta0_2", self.delta0[1]),
            ("varphi_1", self.varphi[0]),
            ("varphi_2", self.varphi[1]),
        ];
        for (name, v) in finite {
            check_finite(name, v)?;
        }
        if self.kappa() <= 0.0 {
            return Err(Error::invalid(
                "kappa_e",
                "kappa_e + kappa_0 must be positive",
            ));
        }
        if self.gamma() <= 0.0 {
            return Err(Error::invalid(
                "gamma_e",
                "gamma_e + gamma_0 must be positive",
            ));
        }
        Ok(())
    }

    /// Complex pump terms `εⱼ e^{−iφⱼ}`.
    pub fn drives(&self) -> [Complex64; 2] {
        [
            Complex64::from_polar(self.eps[0], -self.varphi[0]),
            Complex64::from_polar(self.eps[1], -self.varphi[1]),
        ]
    }

    /// Effective detunings `Δⱼ = Δ₀,ⱼ + gⱼ(βⱼ* + βⱼ)`.
    pub fn effective_detunings(&self, beta: &[Complex64; 2]) -> [f64; 2] {
        [
            self.delta0[0] + 2.0 * self.g[0] * beta[0].re,
            self.delta0[1] + 2.0 * self.g[1] * beta[1].re,
        ]
    }
}

fn check_rate(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(name, "must be finite"));
    }
    if v < 0.0 {
        return Err(Error::invalid(name, "must be non-negative"));
    }
    Ok(())
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be finite"))
    }
}

/// Classical mean-field amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub alpha: [Complex64; 2],
    pub beta: [Complex64; 2],
    /// Max norm of the zero-derivative equation residuals.
    pub residual: f64,
    pub iterations: usize,
}

/// Fixed-point solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Mixing factor `λ` in `x ← (1 − λ) x + λ f(x)`.
    pub damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 10_000,
            damping: 0.5,
        }
    }
}

/// Residuals of the four mean-field equations at zero time derivative.
pub fn steady_state_residuals(
    p: &PlaquetteParams,
    alpha: &[Complex64; 2],
    beta: &[Complex64; 2],
) -> [Complex64; 4] {
    let kappa = p.kappa();
    let gamma = p.gamma();
    let delta = p.effective_detunings(beta);
    let drive = p.drives();
    let mut r = [Complex64::new(0.0, 0.0); 4];
    for j in 0..2 {
        let other = 1 - j;
        r[j] = (-kappa / 2.0 - I * delta[j]) * alpha[j] - I * p.j_c * alpha[other] - drive[j];
        r[2 + j] = (-gamma / 2.0 - I * p.omega[j]) * beta[j]
            - I * p.g[j] * alpha[j].norm_sqr()
            - I * p.j_m * beta[other];
    }
    r
}

fn max_residual(p: &PlaquetteParams, alpha: &[Complex64; 2], beta: &[Complex64; 2]) -> f64 {
    steady_state_residuals(p, alpha, beta)
        .iter()
        .fold(0.0, |m, z| m.max(z.norm()))
}

/// Optical amplitudes for fixed mechanical displacement.
fn optical_update(p: &PlaquetteParams, beta: &[Complex64; 2]) -> Option<[Complex64; 2]> {
    let kappa = p.kappa();
    let delta = p.effective_detunings(beta);
    let drive = p.drives();
    let m = [
        [kappa / 2.0 + I * delta[0], I * p.j_c],
        [I * p.j_c, kappa / 2.0 + I * delta[1]],
    ];
    solve2(m, [-drive[0], -drive[1]])
}

/// Mechanical amplitudes for fixed intracavity intensities.
fn mechanical_update(p: &PlaquetteParams, alpha: &[Complex64; 2]) -> Option<[Complex64; 2]> {
    let gamma = p.gamma();
    let m = [
        [gamma / 2.0 + I * p.omega[0], I * p.j_m],
        [I * p.j_m, gamma / 2.0 + I * p.omega[1]],
    ];
    let rhs = [
        -I * p.g[0] * alpha[0].norm_sqr(),
        -I * p.g[1] * alpha[1].norm_sqr(),
    ];
    solve2(m, rhs)
}

/// Self-consistent classical steady state by damped fixed-point iteration.
///
/// Each step solves the optical 2×2 system at the current mechanical
/// displacement, then the mechanical 2×2 system at the new intensities, and
/// mixes the result with the previous iterate.
pub fn solve_steady_state(params: &PlaquetteParams, opts: SolverOptions) -> Result<SteadyState> {
    params.validate()?;
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    if opts.max_iter == 0 {
        return Err(Error::invalid("max_iter", "must be at least 1"));
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::invalid("damping", "must lie in (0, 1]"));
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut alpha = [zero; 2];
    let mut beta = [zero; 2];
    let mut residual = max_residual(params, &alpha, &beta);
    let mut iterations = 0;
    let lambda = opts.damping;

    let stalled = |alpha, beta, residual, iterations| Error::NonConvergence {
        last: SteadyState {
            alpha,
            beta,
            residual,
            iterations,
        },
    };
    while residual > opts.tol {
        if iterations >= opts.max_iter {
            return Err(stalled(alpha, beta, residual, iterations));
        }
        iterations += 1;
        let Some(a_new) = optical_update(params, &beta) else {
            return Err(stalled(alpha, beta, residual, iterations));
        };
        let Some(b_new) = mechanical_update(params, &a_new) else {
            return Err(stalled(alpha, beta, residual, iterations));
        };
        for j in 0..2 {
            alpha[j] = alpha[j] * (1.0 - lambda) + a_new[j] * lambda;
            beta[j] = beta[j] * (1.0 - lambda) + b_new[j] * lambda;
        }
        residual = max_residual(params, &alpha, &beta);
        if !residual.is_finite() {
            return Err(stalled(alpha, beta, residual, iterations));
        }
    }

    Ok(SteadyState {
        alpha,
        beta,
        residual,
        iterations,
    })
}

/// Linearized plaquette: the inputs to the coefficient matrix `M`.
///
/// `delta` and `omega` are stored relative to `frame_ref`; shifting all of
/// them together with the probe frequency leaves the physics unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedSystem {
    /// Effective optical detunings `Δ₁`, `Δ₂`.
    pub delta: [f64; 2],
    /// Mechanical frequencies `ω₁`, `ω₂`.
    pub omega: [f64; 2],
    /// Linearized coupling magnitudes `G₁`, `G₂` (≥ 0).
    pub coupling: [f64; 2],
    /// Linearized coupling phases `ϕ₁`, `ϕ₂`.
    pub phase: [f64; 2],
    pub j_c: f64,
    pub j_m: f64,
    pub kappa_e: f64,
    pub kappa_0: f64,
    pub gamma_e: f64,
    pub gamma_0: f64,
    /// Common offset already subtracted from `delta` and `omega`.
    pub frame_ref: f64,
}

impl LinearizedSystem {
    /// Builds a linearized system without a nonlinear solve.
    #[allow(clippy::too_many_arguments)]
    pub fn direct(
        delta: [f64; 2],
        omega: [f64; 2],
        coupling: [f64; 2],
        phase: [f64; 2],
        j_c: f64,
        j_m: f64,
        kappa: (f64, f64),
        gamma: (f64, f64),
    ) -> Result<Self> {
        let lin = LinearizedSystem {
            delta,
            omega,
            coupling,
            phase,
            j_c,
            j_m,
            kappa_e: kappa.0,
            kappa_0: kappa.1,
            gamma_e: gamma.0,
            gamma_0: gamma.1,
            frame_ref: 0.0,
        };
        lin.validate()?;
        Ok(lin)
    }

    pub fn validate(&self) -> Result<()> {
        let rates: [(&'static str, f64); 8] = [
            ("G_1", self.coupling[0]),
            ("G_2", self.coupling[1]),
            ("J_c", self.j_c),
            ("J_m", self.j_m),
            ("kappa_e", self.kappa_e),
            ("kappa_0", self.kappa_0),
            ("gamma_e", self.gamma_e),
            ("gamma_0", self.gamma_0),
        ];
        for (name, v) in rates {
            check_rate(name, v)?;
        }
        let finite: [(&'static str, f64); 7] = [
            ("Delta_1", self.delta[0]),
            ("Delta_2", self.delta[1]),
            ("omega_1", self.omega[0]),
            ("omega_2", self.omega[1]),
            ("phi_1", self.phase[0]),
            ("phi_2", self.phase[1]),
            ("frame_ref", self.frame_ref),
        ];
        for (name, v) in finite {
            check_finite(name, v)?;
        }
        if self.kappa() <= 0.0 {
            return Err(Error::invalid(
                "kappa_e",
                "kappa_e + kappa_0 must be positive",
            ));
        }
        if self.gamma() <= 0.0 {
            return Err(Error::invalid(
                "gamma_e",
                "gamma_e + gamma_0 must be positive",
            ));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_e + self.kappa_0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_e + self.gamma_0
    }

    /// Synthetic flux `Φ = ϕ₂ − ϕ₁` reduced to `[0, 2π)`.
    pub fn flux(&self) -> f64 {
        reduce_angle(self.phase[1] - self.phase[0])
    }

    /// Mechanical frequency mismatch `δ = ω₁ − ω₂`.
    pub fn mech_detuning(&self) -> f64 {
        self.omega[0] - self.omega[1]
    }

    /// Mean mechanical frequency `ω_m` in the stored frame.
    pub fn omega_m(&self) -> f64 {
        0.5 * (self.omega[0] + self.omega[1])
    }

    /// Moves to a frame rotating `s` faster: `Δⱼ`, `ωⱼ` decrease by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        LinearizedSystem {
            delta: [self.delta[0] - s, self.delta[1] - s],
            omega: [self.omega[0] - s, self.omega[1] - s],
            frame_ref: self.frame_ref + s,
            ..*self
        }
    }

    /// Same system with coupling phases `(ϕ₁, ϕ₁ + flux)`.
    pub fn with_flux(&self, flux: f64) -> Self {
        LinearizedSystem {
            phase: [self.phase[0], self.phase[0] + flux],
            ..*self
        }
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // `r + TAU` can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Factors used to flag departures from the rotating-wave regime
/// `Δⱼ ≈ ωⱼ ≫ Gⱼ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaCriteria {
    /// Allowed `|Δⱼ − ωⱼ| / ωⱼ`.
    pub detuning_rel_tol: f64,
    /// Required `ωⱼ / Gⱼ`.
    pub frequency_over_coupling: f64,
}

impl Default for RwaCriteria {
    fn default() -> Self {
        RwaCriteria {
            detuning_rel_tol: 0.1,
            frequency_over_coupling: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RwaWarning {
    /// `|Δⱼ − ωⱼ|` exceeds the allowed fraction of `ωⱼ`.
    DetuningMismatch { mode: usize, delta: f64, omega: f64 },
    /// `ωⱼ` is not large enough compared to `Gⱼ`.
    StrongCoupling {
        mode: usize,
        omega: f64,
        coupling: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub system: LinearizedSystem,
    pub warnings: Vec<RwaWarning>,
}

/// Linearizes about `steady` with the default [`RwaCriteria`].
pub fn linearize(params: &PlaquetteParams, steady: &SteadyState) -> Linearization {
    linearize_with(params, steady, RwaCriteria::default())
}

pub fn linearize_with(
    params: &PlaquetteParams,
    steady: &SteadyState,
    criteria: RwaCriteria,
) -> Linearization {
    let delta = params.effective_detunings(&steady.beta);
    let mut coupling = [0.0; 2];
    let mut phase = [0.0; 2];
    for j in 0..2 {
        let a = steady.alpha[j];
        coupling[j] = a.norm() * params.g[j];
        // arg(0) := 0; any choice is gauge-equivalent.
        phase[j] = if a.norm() == 0.0 { 0.0 } else { a.arg() };
    }
    let system = LinearizedSystem {
        delta,
        omega: params.omega,
        coupling,
        phase,
        j_c: params.j_c,
        j_m: params.j_m,
        kappa_e: params.kappa_e,
        kappa_0: params.kappa_0,
        gamma_e: params.gamma_e,
        gamma_0: params.gamma_0,
        frame_ref: 0.0,
    };

    let mut warnings = Vec::new();
    for mode in 0..2 {
        let omega = params.omega[mode];
        let d = delta[mode];
        if (d - omega).abs() > criteria.detuning_rel_tol * omega.abs() {
            warnings.push(RwaWarning::DetuningMismatch {
                mode: mode + 1,
                delta: d,
                omega,
            });
        }
        if omega.abs() < criteria.frequency_over_coupling * coupling[mode] {
            warnings.push(RwaWarning::StrongCoupling {
                mode: mode + 1,
                omega,
                coupling: coupling[mode],
            });
        }
    }
    Linearization { system, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn params() -> PlaquetteParams {
        PlaquetteParams {
            omega: [1000.0, 1000.0],
            delta0: [1000.0, 1000.0],
            g: [0.01, 0.02],
            j_c: 5.0,
            j_m: 10.0,
            kappa_e: 40.0,
            kappa_0: 5.0,
            gamma_e: 1.0,
            gamma_0: 0.0,
            eps: [2000.0, 1500.0],
            varphi: [0.3, 1.2],
            unit: "gamma".to_string(),
        }
    }

    #[test]
    fn undriven_system_sits_at_origin() {
        let mut p = params();
        p.eps = [0.0, 0.0];
        let s = solve_steady_state(&p, SolverOptions::default()).unwrap();
        assert_eq!(s.alpha, [Complex64::new(0.0, 0.0); 2]);
        assert_eq!(s.beta, [Complex64::new(0.0, 0.0); 2]);
        assert_eq!(s.residual, 0.0);
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn converged_state_has_small_residual() {
        let p = params();
        let opts = SolverOptions::default();
        let s = solve_steady_state(&p, opts).unwrap();
        assert!(s.residual <= opts.tol);
        assert!(s.iterations > 0);
    }

    #[test]
    fn non_convergence_carries_last_iterate() {
        let p = params();
        let opts = SolverOptions {
            max_iter: 1,
            ..SolverOptions::default()
        };
        match solve_steady_state(&p, opts) {
            Err(Error::NonConvergence { last }) => {
                assert_eq!(last.iterations, 1);
                assert!(last.residual > opts.tol);
                assert!(last.alpha[0].norm() > 0.0);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn solver_rejects_bad_controls() {
        let p = params();
        let bad_tol = SolverOptions {
            tol: 0.0,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_steady_state(&p, bad_tol),
            Err(Error::InvalidParameter { name: "tol", .. })
        ));
        let bad_iter = SolverOptions {
            max_iter: 0,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_steady_state(&p, bad_iter),
            Err(Error::InvalidParameter {
                name: "max_iter",
                ..
            })
        ));
    }

    #[test]
    fn negative_rate_is_named() {
        let mut p = params();
        p.kappa_e = -1.0;
        assert_eq!(
            p.validate(),
            Err(Error::invalid("kappa_e", "must be non-negative"))
        );
        let mut p = params();
        p.gamma_e = 0.0;
        p.gamma_0 = 0.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter {
                name: "gamma_e",
                ..
            })
        ));
    }

    #[test]
    fn zero_amplitude_has_zero_phase() {
        let p = params();
        let s = SteadyState {
            alpha: [Complex64::new(0.0, 0.0), Complex64::new(-3.0, 4.0)],
            beta: [Complex64::new(0.0, 0.0); 2],
            residual: 0.0,
            iterations: 0,
        };
        let lin = linearize(&p, &s).system;
        assert_eq!(lin.coupling[0], 0.0);
        assert_eq!(lin.phase[0], 0.0);
        assert!((lin.coupling[1] - 5.0 * p.g[1]).abs() < 1e-15);
        assert!((lin.phase[1] - Complex64::new(-3.0, 4.0).arg()).abs() < 1e-15);
    }

    #[test]
    fn coupling_is_product_invariant() {
        let p = params();
        let s = SteadyState {
            alpha: [Complex64::new(120.0, -35.0), Complex64::new(-64.0, 10.0)],
            beta: [Complex64::new(0.1, 0.2); 2],
            residual: 0.0,
            iterations: 0,
        };
        let base = linearize(&p, &s).system;
        let c = 8.0;
        let mut p2 = p.clone();
        p2.g = [p.g[0] * c, p.g[1] * c];
        let s2 = SteadyState {
            alpha: [s.alpha[0] / c, s.alpha[1] / c],
            // Keep the detuning shift g·Re β fixed as well.
            beta: [s.beta[0] / c, s.beta[1] / c],
            ..s
        };
        let scaled = linearize(&p2, &s2).system;
        for j in 0..2 {
            assert!((scaled.coupling[j] - base.coupling[j]).abs() < 1e-12);
            assert!((scaled.delta[j] - base.delta[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn effective_detuning_uses_real_part_of_beta() {
        let p = params();
        let s = SteadyState {
            alpha: [Complex64::new(1.0, 0.0); 2],
            beta: [Complex64::new(-2.0, 7.0), Complex64::new(3.0, -1.0)],
            residual: 0.0,
            iterations: 0,
        };
        let lin = linearize(&p, &s).system;
        assert_eq!(lin.delta[0], 1000.0 + 2.0 * 0.01 * -2.0);
        assert_eq!(lin.delta[1], 1000.0 + 2.0 * 0.02 * 3.0);
    }

    #[test]
    fn rwa_warnings() {
        let mut p = params();
        p.delta0 = [1000.0, 1300.0];
        let s = SteadyState {
            alpha: [Complex64::new(20_000.0, 0.0), Complex64::new(1.0, 0.0)],
            beta: [Complex64::new(0.0, 0.0); 2],
            residual: 0.0,
            iterations: 0,
        };
        let out = linearize(&p, &s);
        // G₁ = 200 > ω₁/10; Δ₂ is 30% off ω₂.
        assert!(out.warnings.contains(&RwaWarning::StrongCoupling {
            mode: 1,
            omega: 1000.0,
            coupling: 200.0
        }));
        assert!(out.warnings.contains(&RwaWarning::DetuningMismatch {
            mode: 2,
            delta: 1300.0,
            omega: 1000.0
        }));
        assert_eq!(out.warnings.len(), 2);
    }

    #[test]
    fn direct_constructor_validates() {
        let err = LinearizedSystem::direct(
            [0.0; 2],
            [0.0; 2],
            [-1.0, 1.0],
            [0.0; 2],
            1.0,
            1.0,
            (1.0, 0.0),
            (1.0, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "G_1", .. }));
    }

    #[test]
    fn flux_is_reduced() {
        let lin = LinearizedSystem::direct(
            [0.0; 2],
            [0.0; 2],
            [1.0; 2],
            [1.0, 1.0 - core::f64::consts::FRAC_PI_2],
            1.0,
            1.0,
            (1.0, 0.0),
            (1.0, 0.0),
        )
        .unwrap();
        assert!((lin.flux() - 1.5 * core::f64::consts::PI).abs() < 1e-12);
        assert_eq!(reduce_angle(-1e-300), 0.0);
        assert_eq!(reduce_angle(0.0), 0.0);
        assert!(reduce_angle(TAU) < 1e-15);
    }

    #[test]
    fn shift_round_trip() {
        let lin = LinearizedSystem::direct(
            [3.0, 4.0],
            [5.0, 6.0],
            [1.0; 2],
            [0.0; 2],
            1.0,
            1.0,
            (1.0, 0.0),
            (1.0, 0.0),
        )
        .unwrap();
        let s = lin.shifted(5.5);
        assert_eq!(s.omega_m(), 0.0);
        assert_eq!(s.frame_ref, 5.5);
        assert_eq!(s.mech_detuning(), lin.mech_detuning());
        assert_eq!(s.shifted(-5.5), lin);
    }

    fn weak(delta0: f64) -> PlaquetteParams {
        PlaquetteParams {
            omega: [delta0, delta0],
            delta0: [delta0, delta0],
            g: [1e-4, 1e-4],
            eps: [50.0, 50.0],
            ..params()
        }
    }

    fn eq8_error(p: &PlaquetteParams, s: &SteadyState) -> f64 {
        let delta = p.effective_detunings(&s.beta);
        (0..2)
            .map(|j| {
                let approx = p.eps[j] / (p.kappa() * p.kappa() / 4.0 + delta[j] * delta[j]).sqrt();
                ((s.alpha[j].norm() - approx) / s.alpha[j].norm()).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn large_detuning_approximation_improves_along_ladder() {
        let mut last = f64::INFINITY;
        for ratio in [3.0, 10.0, 30.0, 100.0, 300.0, 1000.0] {
            let p = weak(ratio * params().j_c);
            let s = solve_steady_state(&p, SolverOptions::default()).unwrap();
            let err = eq8_error(&p, &s);
            assert!(err < last, "ratio {ratio}: {err} !< {last}");
            if ratio >= 100.0 {
                assert!(err < 0.01, "ratio {ratio}: {err}");
            }
            last = err;
        }
    }

    #[test]
    fn residual_agrees_with_hand_substitution() {
        let p = params();
        let s = solve_steady_state(&p, SolverOptions::default()).unwrap();
        let (k, gm) = (p.kappa(), p.gamma());
        let d = [
            p.delta0[0] + p.g[0] * (s.beta[0].conj() + s.beta[0]).re,
            p.delta0[1] + p.g[1] * (s.beta[1].conj() + s.beta[1]).re,
        ];
        let (a, b) = (s.alpha, s.beta);
        let r = [
            -(I * d[0] + k / 2.0) * a[0]
                - I * p.j_c * a[1]
                - p.eps[0] * Complex64::new(0.0, -p.varphi[0]).exp(),
            -(I * d[1] + k / 2.0) * a[1]
                - I * p.j_c * a[0]
                - p.eps[1] * Complex64::new(0.0, -p.varphi[1]).exp(),
            -(I * p.omega[0] + gm / 2.0) * b[0]
                - I * p.g[0] * a[0].conj() * a[0]
                - I * p.j_m * b[1],
            -(I * p.omega[1] + gm / 2.0) * b[1]
                - I * p.g[1] * a[1].conj() * a[1]
                - I * p.j_m * b[0],
        ];
        for z in r {
            assert!(z.norm() <= 1e-10, "{z}");
        }
    }

    #[test]
    fn global_drive_phase_rotates_coupling_phases() {
        // ε e^{−i(φ+θ)} rotates α by e^{−iθ}.
        let p = weak(1000.0);
        let theta = 0.77;
        let mut q = p.clone();
        q.varphi = [p.varphi[0] + theta, p.varphi[1] + theta];
        let opts = SolverOptions::default();
        let a = linearize(&p, &solve_steady_state(&p, opts).unwrap()).system;
        let b = linearize(&q, &solve_steady_state(&q, opts).unwrap()).system;
        for j in 0..2 {
            assert!((a.coupling[j] - b.coupling[j]).abs() < 1e-12 * a.coupling[j]);
            assert!((a.delta[j] - b.delta[j]).abs() < 1e-9);
            let shift = reduce_angle(a.phase[j] - b.phase[j]);
            assert!((shift - theta).abs() < 1e-9, "{shift}");
        }
        assert!((a.flux() - b.flux()).abs() < 1e-9);
    }
}
