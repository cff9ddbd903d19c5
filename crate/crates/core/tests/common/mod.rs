//! Brute-force reference computations shared by the oracle tests and the
//! acceptance runner. Nothing here goes through the FFT: fields are evaluated
//! by direct trigonometric sums and operators are dense matrices.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use slowlim::spectral::{in_dealias_band, wavenumber, SpectralField2D, VerticalModeStack};

/// Random field with every mode `|m|, |n| ≤ kmax` filled, zero elsewhere.
/// Amplitudes decay like `(1+|k|)^{-decay}`.
pub fn random_band(
    rng: &mut ChaCha8Rng,
    n: usize,
    kmax: i64,
    decay: f64,
    real: bool,
) -> SpectralField2D {
    let mut f = SpectralField2D::zeros(n, n);
    for m in -kmax..=kmax {
        for q in -kmax..=kmax {
            let a = (1.0 + ((m * m + q * q) as f64).sqrt()).powf(-decay);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set(m, q, c * a);
        }
    }
    if real {
        f.symmetrize();
    }
    f
}

/// Random real field over the whole spectrum, Nyquist rows included.
pub fn random_full(rng: &mut ChaCha8Rng, n: usize) -> SpectralField2D {
    let coeffs = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut f = SpectralField2D::from_coeffs(n, n, coeffs).unwrap();
    f.symmetrize();
    f
}

/// `f` or one of its partial derivatives (`dx`, `dy` orders) at the points of
/// an `n_out × n_out` grid on `[0, L)²`, by direct summation over modes.
pub fn eval_grid(
    f: &SpectralField2D,
    length: f64,
    n_out: usize,
    dx: u32,
    dy: u32,
) -> Vec<Complex64> {
    let (nx, ny) = f.dims();
    let k0 = 2.0 * PI / length;
    let table = |n_modes: usize| -> Vec<Vec<Complex64>> {
        (0..n_modes)
            .map(|idx| {
                let m = wavenumber(idx, n_modes) as f64;
                (0..n_out)
                    .map(|p| Complex64::from_polar(1.0, k0 * m * p as f64 * length / n_out as f64))
                    .collect()
            })
            .collect()
    };
    let (ex, ey) = (table(nx), table(ny));
    let mut out = vec![Complex64::new(0.0, 0.0); n_out * n_out];
    for (i, exi) in ex.iter().enumerate() {
        let m = wavenumber(i, nx) as f64;
        for (j, eyj) in ey.iter().enumerate() {
            let c = f.coeffs()[i * ny + j];
            if c.norm() == 0.0 {
                continue;
            }
            let q = wavenumber(j, ny) as f64;
            let factor =
                Complex64::new(0.0, k0 * m).powu(dx) * Complex64::new(0.0, k0 * q).powu(dy);
            let c = c * factor;
            for p in 0..n_out {
                let cx = c * exi[p];
                let row = &mut out[p * n_out..(p + 1) * n_out];
                for (r, e) in row.iter_mut().zip(eyj) {
                    *r += cx * e;
                }
            }
        }
    }
    out
}

pub fn eval_real(f: &SpectralField2D, length: f64, n_out: usize, dx: u32, dy: u32) -> Vec<f64> {
    eval_grid(f, length, n_out, dx, dy)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Value of `f` at one point by direct summation.
pub fn eval_point(f: &SpectralField2D, length: f64, x: f64, y: f64) -> f64 {
    let k0 = 2.0 * PI / length;
    f.modes()
        .map(|((m, n), c)| (c * Complex64::from_polar(1.0, k0 * (m as f64 * x + n as f64 * y))).re)
        .sum()
}

/// Coefficient `(m, n)` of grid values on an `n_grid²` grid by the
/// trapezoidal sum.
pub fn quadrature_coeffs(
    values: &[Complex64],
    n_grid: usize,
    length: f64,
    modes: &[(i64, i64)],
) -> Vec<Complex64> {
    let k0 = 2.0 * PI / length;
    let h = length / n_grid as f64;
    let scale = 1.0 / (n_grid * n_grid) as f64;
    modes
        .iter()
        .map(|&(m, n)| {
            let ex: Vec<Complex64> = (0..n_grid)
                .map(|p| Complex64::from_polar(1.0, -k0 * m as f64 * p as f64 * h))
                .collect();
            let ey: Vec<Complex64> = (0..n_grid)
                .map(|p| Complex64::from_polar(1.0, -k0 * n as f64 * p as f64 * h))
                .collect();
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n_grid {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..n_grid {
                    row += values[i * n_grid + j] * ey[j];
                }
                s += row * ex[i];
            }
            s * scale
        })
        .collect()
}

/// Dense Fourier differentiation matrix of order `p` on `n` points, built
/// from the explicit mode sum. For even `n` the Nyquist mode is included only
/// when `nyquist` is set.
pub fn fourier_matrix(n: usize, length: f64, p: u32, nyquist: bool) -> DMatrix<f64> {
    let k0 = 2.0 * PI / length;
    let h = length / n as f64;
    let lo = -(n as i64) / 2;
    let hi = (n as i64 - 1) / 2;
    DMatrix::from_fn(n, n, |i, j| {
        let mut s = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            if n.is_multiple_of(2) && m == lo && !nyquist {
                continue;
            }
            let sym = Complex64::new(0.0, k0 * m as f64).powu(p);
            s += sym * Complex64::from_polar(1.0, k0 * m as f64 * (i as f64 - j as f64) * h);
        }
        s.re / n as f64
    })
}

/// Physical `(u, v)` on the `n²` grid from a dense least-squares solve of
/// `∂x v − ∂y u = ω`, `∂x u + ∂y v = 0`, `mean u = mean v = 0`.
pub fn dense_velocity(omega: &SpectralField2D, length: f64) -> (Vec<f64>, Vec<f64>) {
    let (n, _) = omega.dims();
    let np = n * n;
    let d1 = fourier_matrix(n, length, 1, false);
    let id = DMatrix::<f64>::identity(n, n);
    let dx = d1.kronecker(&id);
    let dy = id.kronecker(&d1);
    let mut a = DMatrix::<f64>::zeros(2 * np + 2, 2 * np);
    a.view_mut((0, 0), (np, np)).copy_from(&(-&dy));
    a.view_mut((0, np), (np, np)).copy_from(&dx);
    a.view_mut((np, 0), (np, np)).copy_from(&dx);
    a.view_mut((np, np), (np, np)).copy_from(&dy);
    for c in 0..np {
        a[(2 * np, c)] = 1.0 / np as f64;
        a[(2 * np + 1, np + c)] = 1.0 / np as f64;
    }
    let mut b = DVector::<f64>::zeros(2 * np + 2);
    for (k, val) in eval_real(omega, length, n, 0, 0).into_iter().enumerate() {
        b[k] = val;
    }
    let sol = a.svd(true, true).solve(&b, 1e-9).unwrap();
    (
        sol.rows(0, np).iter().copied().collect(),
        sol.rows(np, np).iter().copied().collect(),
    )
}

/// `ρ(x, y, z)` on the `n × n × nz` grid, index `(i·n + j)·nz + l`.
pub fn eval_stack_3d(rho: &VerticalModeStack, length: f64, nz: usize) -> Vec<f64> {
    let n = rho.mode(0).dims().0;
    let k0 = 2.0 * PI / length;
    let planes: Vec<Vec<Complex64>> = rho
        .modes()
        .iter()
        .map(|m| eval_grid(m, length, n, 0, 0))
        .collect();
    let mut out = vec![0.0; n * n * nz];
    for p in 0..n * n {
        for l in 0..nz {
            let z = l as f64 * length / nz as f64;
            let mut s = planes[0][p].re;
            for (k, plane) in planes.iter().enumerate().skip(1) {
                s += 2.0 * (plane[p] * Complex64::from_polar(1.0, k0 * k as f64 * z)).re;
            }
            out[p * nz + l] = s;
        }
    }
    out
}

/// `‖∇ξ‖²` over the 3D box for `−Δξ = ρ`, by a dense collocation solve on
/// `n × n × nz` points and trapezoidal quadrature.
pub fn dense_grad_xi_sq(rho: &VerticalModeStack, length: f64, nz: usize) -> f64 {
    let n = rho.mode(0).dims().0;
    let total = n * n * nz;
    let idn = DMatrix::<f64>::identity(n, n);
    let idz = DMatrix::<f64>::identity(nz, nz);
    let d1 = fourier_matrix(n, length, 1, false);
    let d2 = fourier_matrix(n, length, 2, true);
    let d1z = fourier_matrix(nz, length, 1, false);
    let d2z = fourier_matrix(nz, length, 2, true);
    let dx = d1.kronecker(&idn).kronecker(&idz);
    let dy = idn.kronecker(&d1).kronecker(&idz);
    let dz = idn.kronecker(&idn).kronecker(&d1z);
    let lap = d2.kronecker(&idn).kronecker(&idz)
        + idn.kronecker(&d2).kronecker(&idz)
        + idn.kronecker(&idn).kronecker(&d2z);
    // the constant mode is pinned to zero mean by the rank-one term
    let m = -lap + DMatrix::from_element(total, total, 1.0 / total as f64);
    let rhs = DVector::from_vec(eval_stack_3d(rho, length, nz));
    let xi = m.lu().solve(&rhs).unwrap();
    let (gx, gy, gz) = (&dx * &xi, &dy * &xi, &dz * &xi);
    let sum: f64 = gx
        .iter()
        .chain(gy.iter())
        .chain(gz.iter())
        .map(|v| v * v)
        .sum();
    sum * length.powi(3) / total as f64
}

/// Trapezoidal `L²(T²)` norm of real grid values.
pub fn l2_quadrature(values: &[f64], length: f64) -> f64 {
    let ms = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
    length * ms.sqrt()
}

/// Coefficientwise discrete convolution, optionally restricted to inputs and
/// outputs inside the 2/3 band.
pub fn convolve(f: &SpectralField2D, g: &SpectralField2D, n: usize, band: bool) -> SpectralField2D {
    let keep = |m: i64, q: i64| !band || (in_dealias_band(m, n) && in_dealias_band(q, n));
    let mut out = SpectralField2D::zeros(n, n);
    let half = n as i64 / 2;
    for ((m1, n1), a) in f.modes() {
        if !keep(m1, n1) || a.norm() == 0.0 {
            continue;
        }
        for ((m2, n2), b) in g.modes() {
            if !keep(m2, n2) || b.norm() == 0.0 {
                continue;
            }
            let (m, q) = (m1 + m2, n1 + n2);
            if band {
                if !keep(m, q) {
                    continue;
                }
            } else if m < -half || m >= half || q < -half || q >= half {
                panic!("product leaves the grid");
            }
            let cur = out.get(m, q);
            out.set(m, q, cur + a * b);
        }
    }
    out
}
