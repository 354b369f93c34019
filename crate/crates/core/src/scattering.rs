//! Input–output scattering: `U(ω) = √Γ_e (M − iω)⁻¹ √Γ_e − I`.

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{Basis, DynamicsMatrix};
use crate::linalg::{self, Mat4};
use crate::{Error, Result};

/// Condition estimates above this are treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    /// Probe frequency, in the frame of the dynamics matrix.
    pub omega: f64,
    pub u: Mat4,
    /// `S_ij = |U_ij|²`: probability of scattering from port `j` into port `i`.
    pub s: [[f64; 4]; 4],
    pub basis: Basis,
    resolvent: Mat4,
    sqrt_e: [f64; 4],
    sqrt_0: [f64; 4],
}

impl ScatteringResult {
    /// `S_ij` with 1-based port indices.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.s[i - 1][j - 1]
    }

    /// Noise matrix `W(ω) = √Γ_e (M − iω)⁻¹ √Γ_0`.
    pub fn w(&self) -> Mat4 {
        let mut w = linalg::zeros();
        for i in 0..4 {
            for j in 0..4 {
                w[i][j] = self.resolvent[i][j] * (self.sqrt_e[i] * self.sqrt_0[j]);
            }
        }
        w
    }

    /// `(M − iω)⁻¹`.
    pub fn resolvent(&self) -> &Mat4 {
        &self.resolvent
    }

    /// `S` flattened row-major, `S11 … S44`.
    pub fn flat(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for i in 0..4 {
            out[4 * i..4 * i + 4].copy_from_slice(&self.s[i]);
        }
        out
    }
}

/// Probability matrix `|U_ij|²`.
pub fn probabilities(u: &Mat4) -> [[f64; 4]; 4] {
    let mut s = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            s[i][j] = u[i][j].norm_sqr();
        }
    }
    s
}

pub fn scattering_matrix(d: &DynamicsMatrix, omega: f64) -> Result<ScatteringResult> {
    let mut a = d.m;
    for (k, row) in a.iter_mut().enumerate() {
        row[k] -= Complex64::new(0.0, omega);
    }
    let (resolvent, condition) =
        linalg::inverse_with_condition(&a).ok_or(Error::SingularMatrix {
            condition: f64::INFINITY,
        })?;
    if condition > CONDITION_LIMIT {
        return Err(Error::SingularMatrix { condition });
    }
    let sqrt_e = d.gamma_e_vec.map(f64::sqrt);
    let sqrt_0 = d.gamma_0_vec.map(f64::sqrt);
    let mut u = linalg::zeros();
    for i in 0..4 {
        for j in 0..4 {
            u[i][j] = resolvent[i][j] * (sqrt_e[i] * sqrt_e[j]);
        }
        u[i][i] -= 1.0;
    }
    Ok(ScatteringResult {
        omega,
        u,
        s: probabilities(&u),
        basis: d.basis,
        resolvent,
        sqrt_e,
        sqrt_0,
    })
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &Mat4) -> f64 {
    let g = linalg::mul(&linalg::adjoint(u), u);
    linalg::max_abs(&linalg::sub(&g, &linalg::identity()))
}
