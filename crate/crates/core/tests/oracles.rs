//! Spectral operators and diagnostics against brute-force references.

mod common;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use slowlim::diagnostics::{compute_record, continuous_dependence_distance};
use slowlim::init::{build_initial_state, IcKind, IcSpec, Scalars};
use slowlim::model::{Model, ModelState, PhysicalParams};
use slowlim::spectral::{Grid, GridSpec, SpectralField2D, VerticalModeStack};
use slowlim::timestepper::cfl_dt;

fn grid(n: usize, length: f64, kz: usize, nz: usize) -> Grid {
    Grid::new(GridSpec::new(n, n, length, kz, nz).unwrap()).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn biot_savart_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let length = 1.3;
    let g = grid(8, length, 0, 1);
    for _ in 0..3 {
        // every mode off the Nyquist row and column, where odd derivatives
        // vanish by convention
        let mut omega = random_band(&mut rng, 8, 3, 0.0, true);
        omega.set(0, 0, Complex64::new(0.0, 0.0));
        let vel = g.biot_savart(&omega).unwrap();
        let (u_ref, v_ref) = dense_velocity(&omega, length);
        let u = g.to_real(&vel.u).unwrap();
        let v = g.to_real(&vel.v).unwrap();
        let err = max_abs_diff(u.values(), &u_ref).max(max_abs_diff(v.values(), &v_ref));
        assert!(err < 1e-12, "velocity mismatch {err:e}");
    }
}

#[test]
fn nyquist_vorticity_induces_no_velocity() {
    let g = grid(8, 1.0, 0, 1);
    let mut omega = SpectralField2D::zeros(8, 8);
    omega.set(-4, 1, Complex64::new(0.3, 0.1));
    omega.set(-4, -1, Complex64::new(0.3, -0.1));
    omega.set(0, -4, Complex64::new(0.7, 0.0));
    let vel = g.biot_savart(&omega).unwrap();
    assert_eq!(vel.u.max_abs_coeff(), 0.0);
    assert_eq!(vel.v.max_abs_coeff(), 0.0);
}

#[test]
fn velocity_is_solenoidal_with_curl_omega() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = grid(16, 2.0, 0, 1);
    let mut omega = random_band(&mut rng, 16, 7, 1.0, true);
    omega.set(0, 0, Complex64::new(0.0, 0.0));
    let vel = g.biot_savart(&omega).unwrap();
    let div = g.divergence(&vel).unwrap();
    let curl = g.curl(&vel).unwrap();
    assert!(div.max_abs_coeff() < 1e-12);
    assert!(curl.sub(&omega).max_abs_coeff() < 1e-12);
    // ‖∇u_h‖ = ‖ω‖ for a divergence-free field
    let gu = g.gradient_h(&vel.u).unwrap();
    let gv = g.gradient_h(&vel.v).unwrap();
    let grad_sq = gu.u.mean_square() + gu.v.mean_square() + gv.u.mean_square() + gv.v.mean_square();
    assert!((grad_sq - omega.mean_square()).abs() < 1e-12 * omega.mean_square());
}

#[test]
fn inverse_laplacian_matches_dense_poisson() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let length = 0.8;
    let n = 8;
    let g = grid(n, length, 0, 1);
    let mut f = random_full(&mut rng, n);
    f.set(0, 0, Complex64::new(0.0, 0.0));
    let d2 = fourier_matrix(n, length, 2, true);
    let id = DMatrix::<f64>::identity(n, n);
    let lap = d2.kronecker(&id) + id.kronecker(&d2);
    let a = lap + DMatrix::from_element(n * n, n * n, 1.0 / (n * n) as f64);
    let rhs = DVector::from_vec(eval_real(&f, length, n, 0, 0));
    let phi_ref = a.lu().solve(&rhs).unwrap();
    let phi = g.to_real(&g.invert_laplacian_h(&f).unwrap()).unwrap();
    assert!(max_abs_diff(phi.values(), phi_ref.as_slice()) < 1e-12);
}

#[test]
fn gradient_matches_finite_differences_on_refined_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (n, length) = (16, 1.0);
    let g = grid(n, length, 0, 1);
    let f = random_band(&mut rng, n, 5, 3.0, true);
    let grad = g.gradient_h(&f).unwrap();
    let fx = g.to_real(&grad.u).unwrap();
    let fy = g.to_real(&grad.v).unwrap();
    // eighth-order centred stencil with spacing of the 8x refined grid
    let h = length / (8 * n) as f64;
    let weights = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (i as f64 * length / n as f64, j as f64 * length / n as f64);
            let mut dx = 0.0;
            let mut dy = 0.0;
            for (s, wgt) in weights.iter().enumerate() {
                let d = (s + 1) as f64 * h;
                dx += wgt * (eval_point(&f, length, x + d, y) - eval_point(&f, length, x - d, y));
                dy += wgt * (eval_point(&f, length, x, y + d) - eval_point(&f, length, x, y - d));
            }
            worst = worst
                .max((dx / h - fx.get(i, j)).abs())
                .max((dy / h - fy.get(i, j)).abs());
        }
    }
    assert!(worst < 1e-6, "finite-difference mismatch {worst:e}");
}

#[test]
fn dealiased_product_is_exact_inside_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let n = 16;
    let g = grid(n, 1.0, 0, 1);
    let f = random_band(&mut rng, n, 2, 0.0, true);
    let h = random_band(&mut rng, n, 2, 0.0, false);
    let prod = g.dealiased_product(&f, &h).unwrap();
    let expected = convolve(&f, &h, n, false);
    assert!(prod.sub(&expected).max_abs_coeff() < 1e-12);
}

#[test]
fn dealiased_product_is_truncated_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in [12usize, 16] {
        let g = grid(n, 1.0, 0, 1);
        let f = random_full(&mut rng, n);
        let h = random_full(&mut rng, n);
        let prod = g.dealiased_product(&f, &h).unwrap();
        let expected = convolve(&f, &h, n, true);
        assert!(
            prod.sub(&expected).max_abs_coeff() < 1e-12,
            "n = {n}: {:e}",
            prod.sub(&expected).max_abs_coeff()
        );
    }
}

#[test]
fn gradient_of_3d_inverse_laplacian_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (n, kz, length) = (8, 4, 1.2);
    let g = grid(n, length, kz, 9);
    let mut modes = Vec::new();
    let mut rho0 = random_band(&mut rng, n, 3, 0.0, true);
    rho0.set(0, 0, Complex64::new(0.0, 0.0));
    modes.push(rho0);
    for _ in 1..=kz {
        modes.push(random_band(&mut rng, n, 3, 0.0, false));
    }
    let rho = VerticalModeStack::from_modes(modes).unwrap();
    let spectral = g.invert_laplacian_3d_gradient(&rho).unwrap();
    let dense = dense_grad_xi_sq(&rho, length, 9);
    assert!(
        (spectral - dense).abs() < 1e-8 * dense,
        "spectral {spectral} dense {dense}"
    );
}

#[test]
fn tendency_matches_refined_physical_evaluation() {
    let (n, kz, length, fr) = (16, 2, 1.5, 0.7);
    let g = grid(n, length, kz, GridSpec::default_nz(kz));
    let model = Model::new(g.clone(), PhysicalParams::inviscid(fr).unwrap()).unwrap();
    let mut ic = IcSpec::new(IcKind::RandomSpectrum);
    ic.slope = 1.5;
    ic.seed = 5;
    let state = build_initial_state(&ic, &g).unwrap();
    let rate = model.tendency(&state).unwrap();

    let nf = 8 * n;
    let k0 = 2.0 * PI / length;
    // u_h = (−∂yψ, ∂xψ), ψ̂ = −ω̂/|k|²
    let mut psi = state.omega.clone();
    for (idx, c) in psi.coeffs_mut().iter_mut().enumerate() {
        let (m, q) = (
            slowlim::spectral::wavenumber(idx / n, n),
            slowlim::spectral::wavenumber(idx % n, n),
        );
        let k2 = k0 * k0 * (m * m + q * q) as f64;
        *c = if k2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            -*c / k2
        };
    }
    let u: Vec<f64> = eval_real(&psi, length, nf, 0, 1)
        .iter()
        .map(|v| -v)
        .collect();
    let v = eval_real(&psi, length, nf, 1, 0);
    let advect = |f: &SpectralField2D| -> Vec<Complex64> {
        let fx = eval_grid(f, length, nf, 1, 0);
        let fy = eval_grid(f, length, nf, 0, 1);
        (0..nf * nf)
            .map(|p| -(fx[p] * u[p] + fy[p] * v[p]))
            .collect()
    };
    let w = eval_grid(&state.w, length, nf, 0, 0);
    let rho0 = eval_grid(state.rho0(), length, nf, 0, 0);

    let omega_dot = advect(&state.omega);
    let w_dot: Vec<Complex64> = advect(&state.w)
        .into_iter()
        .zip(&rho0)
        .map(|(a, r)| a - r / fr)
        .collect();
    let rho0_dot: Vec<Complex64> = advect(state.rho0())
        .into_iter()
        .zip(&w)
        .map(|(a, wv)| a + wv / fr)
        .collect();

    let band: Vec<(i64, i64)> = (-5..=5)
        .flat_map(|m| (-5..=5).map(move |q| (m, q)))
        .collect();
    let compare = |phys: &[Complex64], got: &SpectralField2D| -> f64 {
        let coeffs = quadrature_coeffs(phys, nf, length, &band);
        let mut expected = SpectralField2D::zeros(n, n);
        for (&(m, q), c) in band.iter().zip(coeffs) {
            expected.set(m, q, c);
        }
        got.sub(&expected).max_abs_coeff()
    };
    let mut worst = compare(&omega_dot, &rate.omega)
        .max(compare(&w_dot, &rate.w))
        .max(compare(&rho0_dot, rate.rho.mode(0)));
    for k in 1..=kz {
        let rk = state.rho.mode(k);
        let vals = eval_grid(rk, length, nf, 0, 0);
        let rk_dot: Vec<Complex64> = advect(rk)
            .into_iter()
            .enumerate()
            .map(|(p, a)| a - Complex64::new(0.0, k0 * k as f64) * w[p] * vals[p])
            .collect();
        worst = worst.max(compare(&rk_dot, rate.rho.mode(k)));
    }
    assert!(worst < 1e-6, "tendency mismatch {worst:e}");
}

#[test]
fn record_norms_match_quadrature() {
    let (n, kz, length) = (16, 2, 1.7);
    let nz = 12;
    let g = grid(n, length, kz, nz);
    let mut ic = IcSpec::new(IcKind::RandomSpectrum);
    ic.slope = 1.0;
    ic.mean_w = 0.3;
    let state = build_initial_state(&ic, &g).unwrap();
    let rec = compute_record(&g, &state).unwrap();

    let w = eval_real(&state.w, length, n, 0, 0);
    let rho0 = eval_real(state.rho0(), length, n, 0, 0);
    let omega = eval_real(&state.omega, length, n, 0, 0);
    assert!((rec.l2_w - l2_quadrature(&w, length)).abs() < 1e-12);
    assert!((rec.l2_rho0 - l2_quadrature(&rho0, length)).abs() < 1e-12);
    assert!((rec.omega.l2 - l2_quadrature(&omega, length)).abs() < 1e-12);
    let linf = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((rec.linf_w - linf).abs() < 1e-12);
    let l4: f64 = (omega.iter().map(|v| v.powi(4)).sum::<f64>() / (n * n) as f64 * length * length)
        .powf(0.25);
    assert!((rec.omega.l4 - l4).abs() < 1e-12 * l4.max(1.0));

    let rho3 = eval_stack_3d(&state.rho, length, nz);
    let l2_3d =
        (rho3.iter().map(|v| v * v).sum::<f64>() / rho3.len() as f64 * length.powi(3)).sqrt();
    assert!((rec.l2_rho_3d - l2_3d).abs() < 1e-12);
    let linf_3d = rho3.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((rec.linf_rho_3d - linf_3d).abs() < 1e-12);

    let gw = (
        eval_real(&state.w, length, n, 1, 0),
        eval_real(&state.w, length, n, 0, 1),
    );
    let h1: f64 =
        gw.0.iter()
            .zip(&gw.1)
            .map(|(a, b)| a * a + b * b)
            .sum::<f64>()
            / (n * n) as f64
            * length
            * length;
    assert!((rec.h1_w - h1).abs() < 1e-12 * h1);
    assert!((rec.mean_w - 0.3).abs() < 1e-15);
}

#[test]
fn distance_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let (n, kz, length) = (8, 1, 1.4);
    let g = grid(n, length, kz, 3);
    let spec = *g.spec();
    let make = |rng: &mut ChaCha8Rng| {
        let mut s = ModelState::zeros(&spec);
        s.omega = random_band(rng, n, 3, 0.0, true);
        s.omega.set(0, 0, Complex64::new(0.0, 0.0));
        s.w = random_band(rng, n, 3, 0.0, true);
        *s.rho.mode_mut(0) = random_band(rng, n, 3, 0.0, true);
        s.rho.mode_mut(0).set(0, 0, Complex64::new(0.0, 0.0));
        *s.rho.mode_mut(1) = random_band(rng, n, 3, 0.0, false);
        s
    };
    let (a, b) = (make(&mut rng), make(&mut rng));
    let d = continuous_dependence_distance(&g, &a, &b).unwrap();

    let d_omega = a.omega.sub(&b.omega);
    let (u, v) = dense_velocity(&d_omega, length);
    let dw = eval_real(&a.w.sub(&b.w), length, n, 0, 0);
    let drho0 = eval_real(&a.rho0().sub(b.rho0()), length, n, 0, 0);
    let sq = |x: &[f64]| l2_quadrature(x, length).powi(2);
    let drho = a.rho.sub(&b.rho);
    let expected = sq(&u) + sq(&v) + sq(&dw) + sq(&drho0) + dense_grad_xi_sq(&drho, length, 3);
    assert!(
        (d - expected).abs() < 1e-10 * expected,
        "D {d} brute force {expected}"
    );
}

#[test]
fn cfl_step_for_taylor_green() {
    let (n, length, fr) = (32, 2.0 * PI, 100.0);
    let g = grid(n, length, 0, 1);
    let model = Model::new(g.clone(), PhysicalParams::inviscid(fr).unwrap()).unwrap();
    let mut ic = IcSpec::new(IcKind::TaylorGreen);
    ic.scalars = Scalars::None;
    let state = build_initial_state(&ic, &g).unwrap();
    // ω = cos x cos y, ψ = −ω/2 on the 2π box
    let mut umax: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (i as f64 * length / n as f64, j as f64 * length / n as f64);
            let u = -0.5 * x.cos() * y.sin();
            let v = 0.5 * x.sin() * y.cos();
            umax = umax.max(u.abs().max(v.abs()));
        }
    }
    let expected = 0.5 * (length / n as f64) / umax.max(length / fr);
    let dt = cfl_dt(&model, &state, 0.5).unwrap();
    assert!(
        (dt - expected).abs() < 1e-12 * expected,
        "dt {dt} expected {expected}"
    );
}

#[test]
fn random_spectrum_follows_requested_slope() {
    let n = 64;
    let g = grid(n, 1.0, 0, 1);
    let mut ic = IcSpec::new(IcKind::RandomSpectrum);
    ic.slope = 4.0;
    ic.seed = 3;
    let state = build_initial_state(&ic, &g).unwrap();
    // mean modulus per integer shell against 1 + k on a log-log fit
    let mut shells = vec![(0.0, 0usize); n];
    for ((m, q), c) in state.omega.modes() {
        let k = ((m * m + q * q) as f64).sqrt().round() as usize;
        if k >= 1 && c.norm() > 0.0 {
            shells[k].0 += c.norm();
            shells[k].1 += 1;
        }
    }
    let pts: Vec<(f64, f64)> = shells
        .iter()
        .enumerate()
        .filter(|(k, s)| *k >= 1 && *k <= 20 && s.1 > 0)
        .map(|(k, s)| ((1.0 + k as f64).ln(), (s.0 / s.1 as f64).ln()))
        .collect();
    let nn = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nn;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nn;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 4.0).abs() < 0.5, "fitted slope {slope}");
}
