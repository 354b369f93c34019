#![allow(clippy::needless_range_loop)]

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use plaquette_core::appendix::{analytical_scattering, AppendixForm};
use plaquette_core::dynamics::{
    build_dynamics_matrix, normal_mode_transform, stability_report, to_normal_mode,
};
use plaquette_core::linalg::{self, Mat4};
use plaquette_core::model::LinearizedSystem;
use plaquette_core::routing::{
    classify_direction, isolation_db, optimal_preset, Orientation, DEFAULT_HIGH, DEFAULT_LOW,
};
use plaquette_core::scattering::{
    probabilities, scattering_matrix, unitarity_defect, ScatteringResult,
};
use plaquette_core::Complex64;

/// At least 256 cases; `PROPTEST_CASES` can raise it.
fn config() -> ProptestConfig {
    let base = ProptestConfig::default();
    ProptestConfig {
        cases: base.cases.max(256),
        ..base
    }
}

prop_compose! {
    fn system(lossless: bool)(
        delta in prop::array::uniform2(-60.0..60.0f64),
        omega in prop::array::uniform2(-60.0..60.0f64),
        coupling in prop::array::uniform2(0.0..60.0f64),
        phase in prop::array::uniform2(0.0..TAU),
        j_c in 0.0..600.0f64,
        j_m in 0.0..30.0f64,
        kappa_e in 0.05..1200.0f64,
        kappa_0 in 0.0..200.0f64,
        gamma_e in 0.05..5.0f64,
        gamma_0 in 0.0..5.0f64,
    ) -> LinearizedSystem {
        let (k0, g0) = if lossless { (0.0, 0.0) } else { (kappa_0, gamma_0) };
        LinearizedSystem::direct(delta, omega, coupling, phase, j_c, j_m, (kappa_e, k0), (gamma_e, g0))
            .unwrap()
    }
}

fn s_at(lin: &LinearizedSystem, omega: f64) -> ScatteringResult {
    scattering_matrix(&build_dynamics_matrix(lin), omega).unwrap()
}

fn max_diff(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

fn transposed(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = a[j][i];
        }
    }
    t
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lossless_scattering_is_unitary(lin in system(true), omega in -100.0..100.0f64) {
        let r = s_at(&lin, omega);
        prop_assert!(unitarity_defect(&r.u) < 1e-9);
        for j in 0..4 {
            let sum: f64 = (0..4).map(|i| r.s[i][j]).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lossy_scattering_is_contractive(lin in system(false), omega in -100.0..100.0f64) {
        // Largest singular value squared = largest eigenvalue of U†U.
        let r = s_at(&lin, omega);
        let g = linalg::mul(&linalg::adjoint(&r.u), &r.u);
        for l in linalg::eigenvalues(&g).unwrap() {
            prop_assert!(l.re <= 1.0 + 1e-9, "{}", l);
        }
    }

    #[test]
    fn probabilities_are_squared_amplitudes(lin in system(false), omega in -100.0..100.0f64) {
        let r = s_at(&lin, omega);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((r.s[i][j] - r.u[i][j].norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn common_phase_is_a_gauge(lin in system(false), omega in -100.0..100.0f64, theta in -10.0..10.0f64) {
        let mut shifted = lin;
        shifted.phase = [lin.phase[0] + theta, lin.phase[1] + theta];
        let d = max_diff(&s_at(&lin, omega).s, &s_at(&shifted, omega).s);
        prop_assert!(d < 1e-12, "{}", d);
    }

    #[test]
    fn flux_reversal_transposes(lin in system(false), omega in -100.0..100.0f64) {
        let reversed = lin.with_flux(TAU - lin.flux());
        let d = max_diff(&s_at(&lin, omega).s, &transposed(&s_at(&reversed, omega).s));
        prop_assert!(d < 1e-12, "{}", d);
    }

    #[test]
    fn trivial_flux_is_reciprocal(lin in system(false), omega in -100.0..100.0f64, half in any::<bool>()) {
        let lin = lin.with_flux(if half { PI } else { 0.0 });
        let s = s_at(&lin, omega).s;
        prop_assert!(max_diff(&s, &transposed(&s)) < 1e-12);
    }

    #[test]
    fn damping_split_and_eigenvalue_bounds(lin in system(false)) {
        let d = build_dynamics_matrix(&lin);
        let a = linalg::adjoint(&d.m);
        let mut h = d.m;
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] += a[i][j];
            }
        }
        let want = [lin.kappa(), lin.kappa(), lin.gamma(), lin.gamma()];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                prop_assert!((h[i][j] - Complex64::new(w, 0.0)).norm() <= 1e-12 * w.max(1.0));
            }
            prop_assert!((d.gamma_e_vec[i] + d.gamma_0_vec[i] - want[i]).abs() <= 1e-12 * want[i]);
        }
        let (lo, hi) = (lin.kappa().min(lin.gamma()) / 2.0, lin.kappa().max(lin.gamma()) / 2.0);
        let report = stability_report(&d).unwrap();
        prop_assert!(report.stable);
        for l in &report.eigenvalues {
            prop_assert!(l.re >= lo * (1.0 - 1e-9) && l.re <= hi * (1.0 + 1e-9), "{} not in [{}, {}]", l, lo, hi);
        }
    }

    #[test]
    fn normal_mode_preserves_spectrum(lin in system(false)) {
        let bare = build_dynamics_matrix(&lin);
        let e1 = stability_report(&bare).unwrap().eigenvalues;
        let e2 = stability_report(&to_normal_mode(&bare).unwrap()).unwrap().eigenvalues;
        let scale = e1.iter().fold(1.0f64, |m, l| m.max(l.norm()));
        for a in &e1 {
            let best = e2.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-10 * scale, "{} unmatched ({})", a, best);
        }
    }

    #[test]
    fn normal_basis_matches_rotated_bare(lin in system(false), omega in -100.0..100.0f64) {
        let bare = build_dynamics_matrix(&lin);
        let u = scattering_matrix(&bare, omega).unwrap().u;
        let t = normal_mode_transform();
        let rotated: Mat4 = linalg::mul(&linalg::mul(&t, &u), &linalg::adjoint(&t));
        let normal = scattering_matrix(&to_normal_mode(&bare).unwrap(), omega).unwrap();
        prop_assert!(max_diff(&normal.s, &probabilities(&rotated)) < 1e-12);
    }

    #[test]
    fn frame_shift_is_invisible(lin in system(false), omega in -100.0..100.0f64, s in -1e4..1e4f64) {
        let d = max_diff(&s_at(&lin, omega).s, &s_at(&lin.shifted(s), omega - s).s);
        prop_assert!(d < 1e-12, "{}", d);
    }

    #[test]
    fn frame_shift_is_exact_on_dyadic_values(
        delta in prop::array::uniform2(-4000i32..4000),
        omega in prop::array::uniform2(-4000i32..4000),
        probe in -4000i32..4000,
        s in -1000i32..1000,
    ) {
        let q = |n: i32| f64::from(n) / 64.0;
        let lin = LinearizedSystem::direct(
            [q(delta[0]), q(delta[1])],
            [q(omega[0]), q(omega[1])],
            [22.5, 21.0],
            [0.0, FRAC_PI_2],
            500.0,
            10.0,
            (1000.0, 0.0),
            (1.0, 0.0),
        )
        .unwrap();
        let shift = f64::from(s);
        let a = s_at(&lin, q(probe));
        let b = s_at(&lin.shifted(shift), q(probe) - shift);
        prop_assert_eq!(a.s, b.s);
    }

    #[test]
    fn isolation_is_antisymmetric(lin in system(false), omega in -100.0..100.0f64, i in 1usize..=4, j in 1usize..=4) {
        let r = s_at(&lin, omega);
        let f = isolation_db(&r, i, j);
        let b = isolation_db(&r, j, i);
        if f.db.is_nan() {
            // Both directions underflow.
            prop_assert!(b.db.is_nan());
        } else {
            prop_assert_eq!(f.db, -b.db);
        }
        prop_assert_eq!(f.saturated, b.saturated);
    }

    #[test]
    fn corrected_closed_forms_match_inversion(lin in system(false), omega in -100.0..100.0f64) {
        let numeric = s_at(&lin, omega).u;
        let closed = analytical_scattering(&lin, omega, AppendixForm::Corrected).unwrap();
        let d = linalg::max_abs(&linalg::sub(&numeric, &closed));
        prop_assert!(d < 1e-10, "{}", d);
    }

    #[test]
    fn sideband_pairing_of_router_orientation(
        j_c in 200.0..800.0f64,
        j_m in 8.0..20.0f64,
        quarter in any::<bool>(),
    ) {
        let flux = if quarter { FRAC_PI_2 } else { 1.5 * PI };
        let lin = optimal_preset(j_c, 1.0, j_m, flux).unwrap();
        let lower = classify_direction(&s_at(&lin, -j_m), DEFAULT_HIGH, DEFAULT_LOW).unwrap();
        let upper = classify_direction(&s_at(&lin, j_m), DEFAULT_HIGH, DEFAULT_LOW).unwrap();
        prop_assert!(lower.passed && upper.passed);
        prop_assert_eq!(lower.orientation, upper.orientation.flipped());
        let expected = if quarter { Orientation::A } else { Orientation::B };
        prop_assert_eq!(lower.orientation, expected);
        // Reversing the flux at fixed ω swaps the orientation.
        let rev = classify_direction(&s_at(&lin.with_flux(TAU - flux), -j_m), DEFAULT_HIGH, DEFAULT_LOW).unwrap();
        prop_assert!(rev.passed);
        prop_assert_eq!(rev.orientation, lower.orientation.flipped());
    }
}
