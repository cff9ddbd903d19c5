use crate::error::{Error, Result};
use crate::model::{Model, ModelState};
use crate::spectral::Grid;
use crate::timestepper::{cfl_dt, rk4_step, RunConfig};

/// `D = ‖ũ_h‖² + ‖w̃‖² + ‖ρ̃_0‖² + ‖∇(−Δ)⁻¹ρ̃‖²` for the difference `s1 − s2`.
///
/// The first three terms are `L²(T²)` norms; the last is over the 3D box.
pub fn continuous_dependence_distance(
    grid: &Grid,
    s1: &ModelState,
    s2: &ModelState,
) -> Result<f64> {
    let spec = grid.spec();
    for s in [s1, s2] {
        if s.omega.dims() != (spec.nx, spec.ny)
            || s.w.dims() != (spec.nx, spec.ny)
            || s.rho.kz_max() != spec.kz_max
            || s.rho.modes().iter().any(|m| m.dims() != (spec.nx, spec.ny))
        {
            return Err(Error::Input(
                "twin states do not match the grid and truncation".into(),
            ));
        }
    }
    let l2 = grid.length() * grid.length();
    let d_omega = s1.omega.sub(&s2.omega);
    let vel = grid.biot_savart(&d_omega)?;
    let dw = s1.w.sub(&s2.w);
    let drho = s1.rho.sub(&s2.rho);
    let horizontal =
        vel.u.mean_square() + vel.v.mean_square() + dw.mean_square() + drho.mode(0).mean_square();
    Ok(l2 * horizontal + grid.invert_laplacian_3d_gradient(&drho)?)
}

/// Separation curve of a twin run and its log-linear fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinResult {
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
    /// Least-squares slope of `log D(t)`; `None` when fewer than two
    /// samples are positive.
    pub rate: Option<f64>,
    pub intercept: Option<f64>,
    /// `max_t (log D(t) − fitted line)`.
    pub max_excess: Option<f64>,
}

impl TwinResult {
    /// True if `log D` never exceeds its fitted line by more than `allowance`.
    /// A curve without a fit (identically zero separation) passes.
    pub fn bounded_by_fit(&self, allowance: f64) -> bool {
        self.max_excess.is_none_or(|e| e <= allowance)
    }
}

/// Integrates `base` and `base + perturbation` in lockstep with a common step
/// and records `D(t)` at the diagnostic cadence.
pub fn twin_experiment(
    model: &Model,
    base: &ModelState,
    perturbation: &ModelState,
    run: &RunConfig,
) -> Result<TwinResult> {
    run.validate()?;
    let spec = model.grid().spec();
    base.validate(spec)?;
    let mut other = base.clone();
    other.omega.axpy(1.0, &perturbation.omega);
    other.w.axpy(1.0, &perturbation.w);
    other.rho.axpy(1.0, &perturbation.rho);
    other.validate(spec)?;
    let mut a = base.clone();
    let mut b = other;

    let grid = model.grid();
    let mut times = vec![a.t];
    let mut distances = vec![continuous_dependence_distance(grid, &a, &b)?];
    let mut step = 0usize;
    while a.t < run.t_end {
        let remaining = run.t_end - a.t;
        let mut dt = match run.dt_override {
            Some(dt) => dt,
            None => cfl_dt(model, &a, run.cfl)
                .map_err(|e| tag(e, "base"))?
                .min(cfl_dt(model, &b, run.cfl).map_err(|e| tag(e, "perturbed"))?),
        };
        let last = dt >= remaining * (1.0 - 1e-9);
        if last {
            dt = remaining;
        }
        a = rk4_step(model, &a, dt).map_err(|e| tag(e, "base"))?;
        b = rk4_step(model, &b, dt).map_err(|e| tag(e, "perturbed"))?;
        step += 1;
        if last {
            a.t = run.t_end;
            b.t = run.t_end;
        }
        if step.is_multiple_of(run.diag_every) || last {
            times.push(a.t);
            distances.push(continuous_dependence_distance(grid, &a, &b)?);
        }
    }

    let (rate, intercept, max_excess) = match log_linear_fit(&times, &distances) {
        Some((slope, icpt)) => {
            let excess = times
                .iter()
                .zip(&distances)
                .filter(|(_, d)| **d > 0.0)
                .map(|(t, d)| d.ln() - (icpt + slope * t))
                .fold(f64::NEG_INFINITY, f64::max);
            (Some(slope), Some(icpt), Some(excess))
        }
        None => (None, None, None),
    };
    Ok(TwinResult {
        times,
        distances,
        rate,
        intercept,
        max_excess,
    })
}

fn tag(err: Error, twin: &str) -> Error {
    match err {
        Error::Blowup { t, context } => Error::Blowup {
            t,
            context: format!("{twin} twin: {context}"),
        },
        other => other,
    }
}

/// Least-squares line through `(t, ln D)` over the positive samples.
fn log_linear_fit(times: &[f64], distances: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(distances)
        .filter(|(_, d)| **d > 0.0)
        .map(|(t, d)| (*t, d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mt))
}
