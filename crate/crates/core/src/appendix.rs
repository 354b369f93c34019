//! Closed-form cofactor expressions for every element of `U(ω)`.
//!
//! Each `U_ij` is a ratio of a cofactor of `M − iω` to the determinant `Z`.
//! Two variants are available: [`AppendixForm::Corrected`] is the exact
//! cofactor expansion, while [`AppendixForm::AsPrinted`] reproduces the
//! published expressions verbatim. Against the exact inverse, the published
//! set differs in two places:
//!
//! * `U₁₁`: the `G₂²` term carries `(γ/2 + iΔ₁ − iω)` instead of
//!   `(γ/2 + iω₁ − iω)`.
//! * `U₃₂`: the `J_c G₁` term carries `(γ/2 + iΔ₂ − iω)` instead of
//!   `(γ/2 + iω₂ − iω)`.
//!
//! Both coincide when `Δⱼ = ωⱼ`. All other fourteen elements and `Z` agree
//! with the exact inverse.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::build_dynamics_matrix;
use crate::linalg::{self, Mat4};
use crate::model::LinearizedSystem;
use crate::scattering::scattering_matrix;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AppendixForm {
    Corrected,
    AsPrinted,
}

/// The determinant `Z(ω) = det(M − iω)` in expanded form.
pub fn z_determinant(lin: &LinearizedSystem, omega: f64) -> Complex64 {
    let t = Terms::new(lin, omega);
    t.z()
}

struct Terms {
    a1: Complex64,
    a2: Complex64,
    m1: Complex64,
    m2: Complex64,
    // γ/2 + iΔⱼ − iω: only appears in the published U₁₁ and U₃₂.
    p1: Complex64,
    p2: Complex64,
    jc: f64,
    jm: f64,
    g1: f64,
    g2: f64,
    phi1: f64,
    phi2: f64,
    ke: f64,
    ge: f64,
}

fn e(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

impl Terms {
    fn new(lin: &LinearizedSystem, omega: f64) -> Self {
        let kappa = lin.kappa();
        let gamma = lin.gamma();
        Terms {
            a1: Complex64::new(kappa / 2.0, lin.delta[0] - omega),
            a2: Complex64::new(kappa / 2.0, lin.delta[1] - omega),
            m1: Complex64::new(gamma / 2.0, lin.omega[0] - omega),
            m2: Complex64::new(gamma / 2.0, lin.omega[1] - omega),
            p1: Complex64::new(gamma / 2.0, lin.delta[0] - omega),
            p2: Complex64::new(gamma / 2.0, lin.delta[1] - omega),
            jc: lin.j_c,
            jm: lin.j_m,
            g1: lin.coupling[0],
            g2: lin.coupling[1],
            phi1: lin.phase[0],
            phi2: lin.phase[1],
            ke: lin.kappa_e,
            ge: lin.gamma_e,
        }
    }

    fn z(&self) -> Complex64 {
        let Terms {
            a1,
            a2,
            m1,
            m2,
            jc,
            jm,
            g1,
            g2,
            ..
        } = *self;
        a1 * a2 * m1 * m2
            + g1 * g1 * a2 * m2
            + g2 * g2 * a1 * m1
            + jc * jc * m1 * m2
            + jm * jm * a1 * a2
            + jc * jc * jm * jm
            + g1 * g1 * g2 * g2
            - 2.0 * jc * jm * g1 * g2 * (self.phi1 - self.phi2).cos()
    }

    fn elements(&self, form: AppendixForm) -> Mat4 {
        let Terms {
            a1,
            a2,
            m1,
            m2,
            jc,
            jm,
            g1,
            g2,
            phi1,
            phi2,
            ke,
            ge,
            ..
        } = *self;
        let (u11_factor, u32_factor) = match form {
            AppendixForm::Corrected => (m1, m2),
            AppendixForm::AsPrinted => (self.p1, self.p2),
        };
        let z = self.z();
        let kk = ke / z;
        let gg = ge / z;
        let kg = (ke * ge).sqrt() / z;
        let one = Complex64::new(1.0, 0.0);
        let d = phi1 - phi2;

        let mut u = linalg::zeros();
        u[0][0] = kk * ((m1 * m2 + jm * jm) * a2 + g2 * g2 * u11_factor) - one;
        u[0][1] = -kk * (I * jc * m1 * m2 - I * jm * g1 * g2 * e(d) + I * jc * jm * jm);
        u[0][2] = kg
            * (-I * g2 * g2 * g1 * e(phi1) + I * jm * jc * g2 * e(phi2)
                - I * g1 * e(phi1) * a2 * m2);
        u[0][3] = -kg * (jc * g2 * e(phi2) * m1 + jm * g1 * e(phi1) * a2);

        u[1][0] = -kk * (I * jc * m1 * m2 - I * jm * g1 * g2 * e(-d) + I * jc * jm * jm);
        u[1][1] = kk * ((m1 * m2 + jm * jm) * a1 + g1 * g1 * m2) - one;
        u[1][2] = -kg * (jm * g2 * e(phi2) * a1 + jc * g1 * e(phi1) * m2);
        u[1][3] = kg
            * (-I * g2 * g1 * g1 * e(phi2) + I * jc * jm * g1 * e(phi1)
                - I * g2 * e(phi2) * a1 * m1);

        u[2][0] = kg
            * (-I * g2 * g2 * g1 * e(-phi1) + I * jc * jm * g2 * e(-phi2)
                - I * g1 * e(-phi1) * a2 * m2);
        u[2][1] = -kg * (jm * g2 * e(-phi2) * a1 + jc * g1 * e(-phi1) * u32_factor);
        u[2][2] = gg * ((a1 * a2 + jc * jc) * m2 + g2 * g2 * a1) - one;
        u[2][3] = -gg * (I * jm * a1 * a2 - I * jc * g1 * g2 * e(-d) + I * jc * jc * jm);

        u[3][0] = -kg * (jc * g2 * e(-phi2) * m1 + jm * g1 * e(-phi1) * a2);
        u[3][1] = kg
            * (-I * g2 * e(-phi2) * a1 * m1 + I * jc * jm * g1 * e(-phi1)
                - I * g1 * g1 * g2 * e(-phi2));
        u[3][2] = -gg * (I * jm * a1 * a2 - I * g1 * g2 * jc * e(d) + I * jc * jc * jm);
        u[3][3] = gg * ((a1 * a2 + jc * jc) * m1 + g1 * g1 * a2) - one;
        u
    }
}

/// Evaluates `U(ω)` from the closed forms.
pub fn analytical_scattering(
    lin: &LinearizedSystem,
    omega: f64,
    form: AppendixForm,
) -> Result<Mat4> {
    let t = Terms::new(lin, omega);
    let z = t.z();
    if !(z.norm() >= f64::MIN_POSITIVE) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::SingularMatrix {
            condition: f64::INFINITY,
        });
    }
    Ok(t.elements(form))
}

/// Element whose deviation from the numerical inverse exceeded the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flag {
    pub omega_index: usize,
    pub omega: f64,
    /// 1-based row/column.
    pub i: usize,
    pub j: usize,
    pub form: AppendixForm,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub tol: f64,
    /// `max_ω |U_num − U_corrected|` per element.
    pub corrected: [[f64; 4]; 4],
    /// `max_ω |U_num − U_printed|` per element.
    pub as_printed: [[f64; 4]; 4],
    pub flags: Vec<Flag>,
}

impl DiscrepancyReport {
    pub fn max_corrected(&self) -> f64 {
        self.corrected.iter().flatten().fold(0.0, |m, &x| m.max(x))
    }

    pub fn max_as_printed(&self) -> f64 {
        self.as_printed.iter().flatten().fold(0.0, |m, &x| m.max(x))
    }

    pub fn passed(&self, form: AppendixForm) -> bool {
        !self.flags.iter().any(|f| f.form == form)
    }
}

/// Compares both closed-form variants against the LU inverse on a grid.
pub fn verify_appendix(
    lin: &LinearizedSystem,
    omega_grid: &[f64],
    tol: f64,
) -> Result<DiscrepancyReport> {
    if omega_grid.is_empty() {
        return Err(Error::InvalidGrid("frequency grid is empty"));
    }
    let d = build_dynamics_matrix(lin);
    let mut report = DiscrepancyReport {
        tol,
        corrected: [[0.0; 4]; 4],
        as_printed: [[0.0; 4]; 4],
        flags: Vec::new(),
    };
    for (k, &omega) in omega_grid.iter().enumerate() {
        let numeric = scattering_matrix(&d, omega)?.u;
        for form in [AppendixForm::Corrected, AppendixForm::AsPrinted] {
            let closed = analytical_scattering(lin, omega, form)?;
            let table = match form {
                AppendixForm::Corrected => &mut report.corrected,
                AppendixForm::AsPrinted => &mut report.as_printed,
            };
            for i in 0..4 {
                for j in 0..4 {
                    let dev = (numeric[i][j] - closed[i][j]).norm();
                    table[i][j] = table[i][j].max(dev);
                    if !(dev <= tol) {
                        report.flags.push(Flag {
                            omega_index: k,
                            omega,
                            i: i + 1,
                            j: j + 1,
                            form,
                            deviation: dev,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}
