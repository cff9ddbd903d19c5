use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Model, ModelState};
use crate::timestepper::{integrate, Observer, RunConfig};

use super::DiagnosticsRecord;

/// Outcome of a step-halving study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// Max-coefficient error of each run against the exact solution, or of
    /// each run against the next finer one when no exact solution is known.
    pub errors: Vec<f64>,
    /// Observed order between consecutive errors.
    pub orders: Vec<f64>,
    pub against_exact: bool,
}

impl ConvergenceReport {
    /// Smallest observed order.
    pub fn order(&self) -> Option<f64> {
        self.orders.iter().copied().reduce(f64::min)
    }
}

struct Discard;

impl Observer for Discard {
    fn diagnostic(&mut self, _: usize, _: &DiagnosticsRecord, _: &ModelState) -> Result<()> {
        Ok(())
    }
}

/// Integrates `initial` to `t_end` once per step size in `dts` (decreasing)
/// and measures the order of the time error.
pub fn convergence_study(
    model: &Model,
    initial: &ModelState,
    t_end: f64,
    dts: &[f64],
    exact: Option<&ModelState>,
) -> Result<ConvergenceReport> {
    let needed = if exact.is_some() { 2 } else { 3 };
    if dts.len() < needed {
        return Err(Error::Config(format!(
            "convergence study needs at least {needed} step sizes"
        )));
    }
    if dts
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Less))
    {
        return Err(Error::Config("step sizes must decrease".into()));
    }
    let finals = dts
        .iter()
        .map(|&dt| {
            let run = RunConfig {
                diag_every: usize::MAX,
                ..RunConfig::new(t_end).with_dt(dt)
            };
            integrate(model, initial, &run, &mut Discard)
        })
        .collect::<Result<Vec<_>>>()?;

    let (errors, spacing): (Vec<f64>, Vec<f64>) = match exact {
        Some(ex) => (
            finals.iter().map(|s| max_difference(s, ex)).collect(),
            dts.to_vec(),
        ),
        None => (
            finals
                .windows(2)
                .map(|w| max_difference(&w[0], &w[1]))
                .collect(),
            dts[..dts.len() - 1].to_vec(),
        ),
    };
    let orders = errors
        .windows(2)
        .zip(spacing.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    Ok(ConvergenceReport {
        dts: dts.to_vec(),
        errors,
        orders,
        against_exact: exact.is_some(),
    })
}

/// Largest coefficient difference over all evolved fields.
pub fn max_difference(a: &ModelState, b: &ModelState) -> f64 {
    let mut m = a.omega.sub(&b.omega).max_abs_coeff();
    m = m.max(a.w.sub(&b.w).max_abs_coeff());
    for (x, y) in a.rho.modes().iter().zip(b.rho.modes()) {
        m = m.max(x.sub(y).max_abs_coeff());
    }
    m
}

/// Exact inviscid solution at time `t` for a state with `ω = 0` and
/// `ρ_k = 0` for `k ≥ 1`: `w` and `ρ_0` rotate pointwise at angular
/// frequency `1/Fr`.
pub fn oscillator_exact(model: &Model, initial: &ModelState, t: f64) -> Result<ModelState> {
    if model.params().is_viscous() {
        return Err(Error::Precondition(
            "the oscillator solution is only exact without diffusion".into(),
        ));
    }
    if initial.omega.max_abs_coeff() != 0.0
        || initial.rho.modes()[1..]
            .iter()
            .any(|m| m.max_abs_coeff() != 0.0)
    {
        return Err(Error::Precondition(
            "the oscillator solution needs ω = 0 and ρ_k = 0 for k ≥ 1".into(),
        ));
    }
    let (s, c) = ((t - initial.t) / model.params().froude).sin_cos();
    let mut out = initial.clone();
    out.t = t;
    out.w = initial.w.scaled(c);
    out.w.axpy(-s, initial.rho0());
    let mut rho0 = initial.rho0().scaled(c);
    rho0.axpy(s, &initial.w);
    *out.rho.mode_mut(0) = rho0;
    Ok(out)
}
