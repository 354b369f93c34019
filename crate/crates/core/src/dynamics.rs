//! The linearized coefficient matrix `M` with `dV/dt = −M V + inputs`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{self, Mat4};
use crate::model::LinearizedSystem;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Mode ordering of the rows and columns of a [`DynamicsMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `(a₁, a₂, b₁, b₂)`.
    Bare,
    /// `(a₁, a₂, b₊, b₋)` with `b± = (b₁ ± b₂)/√2`.
    Normal,
}

impl Basis {
    pub fn port_labels(self) -> [&'static str; 4] {
        match self {
            Basis::Bare => ["a1", "a2", "b1", "b2"],
            Basis::Normal => ["a1", "a2", "b+", "b-"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Bare => "bare",
            Basis::Normal => "normal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsMatrix {
    pub m: Mat4,
    pub basis: Basis,
    /// Diagonal of `Γ_e`.
    pub gamma_e_vec: [f64; 4],
    /// Diagonal of `Γ_0`.
    pub gamma_0_vec: [f64; 4],
}

/// Assembles `M` in the bare basis.
pub fn build_dynamics_matrix(lin: &LinearizedSystem) -> DynamicsMatrix {
    let kappa = lin.kappa();
    let gamma = lin.gamma();
    let zero = Complex64::new(0.0, 0.0);
    let opto = |j: usize| I * Complex64::from_polar(lin.coupling[j], lin.phase[j]);
    let opto_conj = |j: usize| I * Complex64::from_polar(lin.coupling[j], -lin.phase[j]);
    let jc = I * lin.j_c;
    let jm = I * lin.j_m;
    let m = [
        [kappa / 2.0 + I * lin.delta[0], jc, opto(0), zero],
        [jc, kappa / 2.0 + I * lin.delta[1], zero, opto(1)],
        [opto_conj(0), zero, gamma / 2.0 + I * lin.omega[0], jm],
        [zero, opto_conj(1), jm, gamma / 2.0 + I * lin.omega[1]],
    ];
    DynamicsMatrix {
        m,
        basis: Basis::Bare,
        gamma_e_vec: [lin.kappa_e, lin.kappa_e, lin.gamma_e, lin.gamma_e],
        gamma_0_vec: [lin.kappa_0, lin.kappa_0, lin.gamma_0, lin.gamma_0],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub stable: bool,
}

impl StabilityReport {
    pub fn min_real(&self) -> f64 {
        self.eigenvalues.first().map_or(f64::NAN, |z| z.re)
    }
}

/// Eigenvalues of `M`; the system is stable iff every real part is positive.
pub fn stability_report(d: &DynamicsMatrix) -> Result<StabilityReport> {
    let mut eigenvalues: Vec<Complex64> = linalg::eigenvalues(&d.m)?.into_iter().collect();
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let stable = eigenvalues[0].re > 0.0;
    Ok(StabilityReport {
        eigenvalues,
        stable,
    })
}

/// Real orthogonal change of basis `T = diag(1, 1, H)` with
/// `H = [[1, 1], [1, −1]]/√2`. `T` is its own inverse.
pub fn normal_mode_transform() -> Mat4 {
    let mut t = linalg::zeros();
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    t[0][0] = Complex64::new(1.0, 0.0);
    t[1][1] = Complex64::new(1.0, 0.0);
    t[2][2] = h;
    t[2][3] = h;
    t[3][2] = h;
    t[3][3] = -h;
    t
}

/// `M′ = T M T†` in the `(a₁, a₂, b₊, b₋)` basis.
pub fn to_normal_mode(d: &DynamicsMatrix) -> Result<DynamicsMatrix> {
    if d.basis != Basis::Bare {
        return Err(Error::BasisError);
    }
    let t = normal_mode_transform();
    let m = linalg::mul(&linalg::mul(&t, &d.m), &linalg::adjoint(&t));
    // The mechanical decays are shared by b₁ and b₂, so Γ commutes with T.
    let rotate = |v: [f64; 4]| {
        let mech = 0.5 * (v[2] + v[3]);
        [v[0], v[1], mech, mech]
    };
    Ok(DynamicsMatrix {
        m,
        basis: Basis::Normal,
        gamma_e_vec: rotate(d.gamma_e_vec),
        gamma_0_vec: rotate(d.gamma_0_vec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fig2() -> LinearizedSystem {
        let g = 500.0f64.sqrt();
        LinearizedSystem::direct(
            [0.0; 2],
            [0.0; 2],
            [g, g],
            [0.0, FRAC_PI_2],
            500.0,
            10.0,
            (1000.0, 0.0),
            (1.0, 0.0),
        )
        .unwrap()
    }

    fn uncoupled() -> LinearizedSystem {
        LinearizedSystem::direct(
            [3.0, -2.0],
            [7.0, 1.5],
            [0.0; 2],
            [0.4, 1.1],
            0.0,
            0.0,
            (4.0, 1.0),
            (0.5, 0.25),
        )
        .unwrap()
    }

    #[test]
    fn zero_couplings_give_diagonal_matrix() {
        let lin = uncoupled();
        let d = build_dynamics_matrix(&lin);
        let expected = [c(2.5, 3.0), c(2.5, -2.0), c(0.375, 7.0), c(0.375, 1.5)];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expected[i] } else { c(0.0, 0.0) };
                assert_eq!(d.m[i][j], want);
            }
        }
        let report = stability_report(&d).unwrap();
        assert!(report.stable);
        let mut sorted = expected;
        sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        assert_eq!(report.eigenvalues, sorted.to_vec());
    }

    #[test]
    fn fig2_coupling_entries() {
        let d = build_dynamics_matrix(&fig2());
        let g = 500.0f64.sqrt();
        assert!((d.m[0][2] - c(0.0, g)).norm() < 1e-14);
        let want = I * Complex64::from_polar(g, FRAC_PI_2);
        assert!((d.m[1][3] - want).norm() < 1e-14);
        assert_eq!(d.m[0][3], c(0.0, 0.0));
        assert_eq!(d.m[3][0], c(0.0, 0.0));
        assert_eq!(d.m[1][2], c(0.0, 0.0));
        assert_eq!(d.m[2][1], c(0.0, 0.0));
        assert_eq!(d.m[0][1], c(0.0, 500.0));
        assert_eq!(d.m[2][3], c(0.0, 10.0));
        assert!(stability_report(&d).unwrap().stable);
    }

    #[test]
    fn hermitian_split() {
        let d = build_dynamics_matrix(&fig2());
        let mh = linalg::adjoint(&d.m);
        for i in 0..4 {
            for j in 0..4 {
                let damp = (d.m[i][j] + mh[i][j]) * 0.5;
                let want = if i == j {
                    0.5 * (d.gamma_e_vec[i] + d.gamma_0_vec[i])
                } else {
                    0.0
                };
                assert!((damp - c(want, 0.0)).norm() < 1e-13);
                // (M − M†)/(2i) is Hermitian.
                let h_ij = (d.m[i][j] - mh[i][j]) / (2.0 * I);
                let h_ji = (d.m[j][i] - mh[j][i]) / (2.0 * I);
                assert!((h_ij - h_ji.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn normal_mode_degenerate_mechanics() {
        let lin = fig2();
        let d = to_normal_mode(&build_dynamics_matrix(&lin)).unwrap();
        assert_eq!(d.basis, Basis::Normal);
        assert!(d.m[2][3].norm() < 1e-14);
        assert!(d.m[3][2].norm() < 1e-14);
        assert!((d.m[2][2] - c(0.5, lin.omega_m() + lin.j_m)).norm() < 1e-13);
        assert!((d.m[3][3] - c(0.5, lin.omega_m() - lin.j_m)).norm() < 1e-13);
        let g = lin.coupling[0] * FRAC_1_SQRT_2;
        let e2 = Complex64::from_polar(1.0, lin.phase[1]);
        assert!((d.m[0][2] - I * g).norm() < 1e-13);
        assert!((d.m[0][3] - I * g).norm() < 1e-13);
        assert!((d.m[1][2] - I * g * e2).norm() < 1e-13);
        assert!((d.m[1][3] + I * g * e2).norm() < 1e-13);
        assert!((d.m[3][1] + I * g * e2.conj()).norm() < 1e-13);
        assert_eq!(d.gamma_e_vec, [1000.0, 1000.0, 1.0, 1.0]);
    }

    #[test]
    fn normal_mode_without_optomechanics() {
        let mut lin = uncoupled();
        lin.omega = [4.0, 4.0];
        lin.j_m = 1.5;
        let d = to_normal_mode(&build_dynamics_matrix(&lin)).unwrap();
        let g2 = lin.gamma() / 2.0;
        assert!((d.m[2][2] - c(g2, 5.5)).norm() < 1e-14);
        assert!((d.m[3][3] - c(g2, 2.5)).norm() < 1e-14);
        assert!(d.m[2][3].norm() < 1e-15 && d.m[3][2].norm() < 1e-15);
        for i in 0..2 {
            for j in 2..4 {
                assert_eq!(d.m[i][j], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn normal_mode_split_mechanics() {
        let mut lin = fig2();
        lin.omega = [3.0, -2.0];
        let d = to_normal_mode(&build_dynamics_matrix(&lin)).unwrap();
        let want = I * (lin.omega[0] - lin.omega[1]) / 2.0;
        assert!((d.m[2][3] - want).norm() < 1e-13);
        assert!((d.m[3][2] - want).norm() < 1e-13);
    }

    #[test]
    fn normal_mode_twice_is_an_error() {
        let d = to_normal_mode(&build_dynamics_matrix(&fig2())).unwrap();
        assert_eq!(to_normal_mode(&d), Err(Error::BasisError));
    }

    #[test]
    fn eigenvalues_preserved_by_basis_change() {
        let mut lin = fig2();
        lin.omega = [1.0, -1.5];
        lin.phase = [0.3, 0.3 + PI / 3.0];
        let bare = build_dynamics_matrix(&lin);
        let e1 = stability_report(&bare).unwrap().eigenvalues;
        let e2 = stability_report(&to_normal_mode(&bare).unwrap())
            .unwrap()
            .eigenvalues;
        for (a, b) in e1.iter().zip(&e2) {
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn frame_shift_moves_eigenvalues() {
        let lin = fig2();
        let s = 123.25;
        let e0 = stability_report(&build_dynamics_matrix(&lin))
            .unwrap()
            .eigenvalues;
        let e1 = stability_report(&build_dynamics_matrix(&lin.shifted(s)))
            .unwrap()
            .eigenvalues;
        for a in &e0 {
            let want = a - c(0.0, s);
            let best = e1
                .iter()
                .map(|b| (b - want).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{a}: {best}");
        }
    }

    #[test]
    fn loss_free_block_is_unstable() {
        // No damping on the mechanics and no coupling to the optics.
        let mut lin = uncoupled();
        lin.gamma_e = 1e-300;
        lin.gamma_0 = 0.0;
        let mut d = build_dynamics_matrix(&lin);
        d.m[2][2].re = -0.1;
        assert!(!stability_report(&d).unwrap().stable);
    }
}
