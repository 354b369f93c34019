//! Small dense complex linear algebra on fixed 4×4 arrays.
//!
//! Everything here is hard-shaped to the plaquette: LU inversion with partial
//! pivoting and a condition estimate, and eigenvalues by Hessenberg reduction
//! followed by shifted QR.

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub const N: usize = 4;

pub type Mat4 = [[Complex64; N]; N];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn zeros() -> Mat4 {
    [[ZERO; N]; N]
}

pub fn identity() -> Mat4 {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn diag(d: [Complex64; N]) -> Mat4 {
    let mut m = zeros();
    for i in 0..N {
        m[i][i] = d[i];
    }
    m
}

pub fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = zeros();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..N {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// Conjugate transpose.
pub fn adjoint(a: &Mat4) -> Mat4 {
    let mut c = zeros();
    for i in 0..N {
        for j in 0..N {
            c[j][i] = a[i][j].conj();
        }
    }
    c
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut c = zeros();
    for i in 0..N {
        for j in 0..N {
            c[j][i] = a[i][j];
        }
    }
    c
}

pub fn sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = *a;
    for i in 0..N {
        for j in 0..N {
            c[i][j] -= b[i][j];
        }
    }
    c
}

/// Largest elementwise modulus.
pub fn max_abs(a: &Mat4) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(0.0, |m, z| m.max(z.norm()))
}

/// Induced 1-norm (max column sum).
pub fn norm_1(a: &Mat4) -> f64 {
    (0..N)
        .map(|j| (0..N).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn trace(a: &Mat4) -> Complex64 {
    (0..N).map(|i| a[i][i]).sum()
}

/// LU factorization `P A = L U` with partial pivoting, stored in place.
#[derive(Debug, Clone, Copy)]
pub struct Lu {
    lu: Mat4,
    perm: [usize; N],
    sign: f64,
}

impl Lu {
    /// Returns `None` when an exact zero pivot is met.
    pub fn factor(a: &Mat4) -> Option<Self> {
        let mut lu = *a;
        let mut perm = [0, 1, 2, 3];
        let mut sign = 1.0;
        for k in 0..N {
            let p = (k..N)
                .max_by(|&x, &y| lu[x][k].norm().total_cmp(&lu[y][k].norm()))
                .unwrap_or(k);
            if lu[p][k] == ZERO {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = lu[k][k];
            for i in k + 1..N {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                for j in k + 1..N {
                    let u = lu[k][j];
                    lu[i][j] -= f * u;
                }
            }
        }
        Some(Lu { lu, perm, sign })
    }

    pub fn det(&self) -> Complex64 {
        (0..N).fold(Complex64::new(self.sign, 0.0), |d, i| d * self.lu[i][i])
    }

    pub fn solve(&self, b: &[Complex64; N]) -> [Complex64; N] {
        let mut x = [ZERO; N];
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for k in 0..i {
                let l = self.lu[i][k];
                x[i] -= l * x[k];
            }
        }
        for i in (0..N).rev() {
            for k in i + 1..N {
                let u = self.lu[i][k];
                x[i] -= u * x[k];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    pub fn inverse(&self) -> Mat4 {
        let mut inv = zeros();
        for j in 0..N {
            let mut e = [ZERO; N];
            e[j] = ONE;
            let col = self.solve(&e);
            for i in 0..N {
                inv[i][j] = col[i];
            }
        }
        inv
    }
}

/// Matrix inverse together with the 1-norm condition number `‖A‖₁‖A⁻¹‖₁`.
pub fn inverse_with_condition(a: &Mat4) -> Option<(Mat4, f64)> {
    let lu = Lu::factor(a)?;
    let inv = lu.inverse();
    let cond = norm_1(a) * norm_1(&inv);
    if !cond.is_finite() {
        return None;
    }
    Some((inv, cond))
}

/// Solves the 2×2 system `[[a, b], [c, d]] x = rhs` by Cramer's rule.
pub fn solve2(m: [[Complex64; 2]; 2], rhs: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == ZERO {
        return None;
    }
    Some([
        (m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Unitary rotation `G` with `G [x; y] = [r; 0]`, stored as `(c, s)` where
/// `G = [[c, s], [-conj(s), c]]` and `c` is real.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, ONE);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Left-multiplies rows `p`, `p + 1` by `G`, restricted to columns `cols`.
fn rotate_rows(h: &mut Mat4, p: usize, c: f64, s: Complex64, cols: core::ops::Range<usize>) {
    for j in cols {
        let u = h[p][j];
        let v = h[p + 1][j];
        h[p][j] = u * c + s * v;
        h[p + 1][j] = -s.conj() * u + v * c;
    }
}

/// Right-multiplies columns `p`, `p + 1` by `G†`, restricted to rows `rows`.
fn rotate_cols(h: &mut Mat4, p: usize, c: f64, s: Complex64, rows: core::ops::Range<usize>) {
    for row in h[rows].iter_mut() {
        let u = row[p];
        let v = row[p + 1];
        row[p] = u * c + v * s.conj();
        row[p + 1] = -u * s + v * c;
    }
}

/// Unitary similarity to upper Hessenberg form.
pub fn hessenberg(a: &Mat4) -> Mat4 {
    let mut h = *a;
    for j in 0..N - 2 {
        for i in (j + 2..N).rev() {
            let (c, s) = givens(h[i - 1][j], h[i][j]);
            if s == ZERO && c == 1.0 {
                continue;
            }
            rotate_rows(&mut h, i - 1, c, s, 0..N);
            rotate_cols(&mut h, i - 1, c, s, 0..N);
            h[i][j] = ZERO;
        }
    }
    h
}

const MAX_QR_SWEEPS: usize = 30 * N;

/// Eigenvalues of a general complex 4×4 matrix (unsorted).
pub fn eigenvalues(a: &Mat4) -> Result<[Complex64; N]> {
    if a.iter()
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::EigenFailure);
    }
    let eps = f64::EPSILON;
    let mut h = hessenberg(a);
    let mut eig = [ZERO; N];
    let mut hi = N - 1;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        // Split point: the lowest index `lo` such that h[lo][lo-1] is negligible.
        let mut lo = hi;
        while lo > 0 {
            let scale = h[lo][lo].l1_norm() + h[lo - 1][lo - 1].l1_norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[lo][lo - 1].l1_norm() <= eps * scale {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= MAX_QR_SWEEPS {
            return Err(Error::EigenFailure);
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break symmetric stalls.
            h[hi][hi] + Complex64::new(h[hi][hi - 1].l1_norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        for k in lo..=hi {
            h[k][k] -= shift;
        }
        let mut rots = [(1.0, ZERO); N];
        for k in lo..hi {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            rotate_rows(&mut h, k, c, s, k..hi + 1);
            h[k + 1][k] = ZERO;
            rots[k] = (c, s);
        }
        for k in lo..hi {
            let (c, s) = rots[k];
            rotate_cols(&mut h, k, c, s, lo..(k + 2).min(hi + 1));
        }
        for k in lo..=hi {
            h[k][k] += shift;
        }
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2×2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
