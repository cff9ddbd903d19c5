//! Classical four-stage Runge–Kutta integration with an advective step
//! limit.

use crate::diagnostics::{compute_record, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::model::{Model, ModelState, StateTendency};

/// Time integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Absolute end time.
    pub t_end: f64,
    pub cfl: f64,
    /// Fixed step, bypassing [`cfl_dt`].
    pub dt_override: Option<f64>,
    /// Steps between diagnostic records.
    pub diag_every: usize,
    pub snapshot_every: Option<usize>,
}

impl RunConfig {
    pub const DEFAULT_CFL: f64 = 0.5;
    pub const DEFAULT_DIAG_EVERY: usize = 10;

    pub fn new(t_end: f64) -> Self {
        RunConfig {
            t_end,
            cfl: Self::DEFAULT_CFL,
            dt_override: None,
            diag_every: Self::DEFAULT_DIAG_EVERY,
            snapshot_every: None,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt_override = Some(dt);
        self
    }

    pub fn with_diag_every(mut self, every: usize) -> Self {
        self.diag_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if let Some(dt) = self.dt_override {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if self.diag_every == 0 {
            return Err(Error::Config("diag_every must be positive".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Config("snapshot_every must be positive".into()));
        }
        Ok(())
    }
}

/// Receives diagnostics (and optional snapshots) while [`integrate`] runs.
pub trait Observer {
    fn diagnostic(
        &mut self,
        step: usize,
        record: &DiagnosticsRecord,
        state: &ModelState,
    ) -> Result<()>;

    fn snapshot(&mut self, _step: usize, _state: &ModelState) -> Result<()> {
        Ok(())
    }
}

/// Advective step `cfl · h / max(|u|_∞, L/Fr)`.
///
/// The `L/Fr` floor keeps the buoyancy oscillation of angular frequency
/// `1/Fr` resolved when the flow is slow; for a quiescent flow the step is
/// `cfl · h · Fr / L`.
pub fn cfl_dt(model: &Model, state: &ModelState, cfl: f64) -> Result<f64> {
    let g = model.grid();
    let spec = g.spec();
    let h = spec.min_spacing();
    let guard = spec.length / model.params().froude;
    let vel = model.velocity(state)?;
    let u = g.to_real(&vel.u)?;
    let v = g.to_real(&vel.v)?;
    let umax = u
        .values()
        .iter()
        .zip(v.values())
        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
    Ok(cfl * h / umax.max(guard))
}

/// One classical RK4 step of size `dt > 0`.
pub fn rk4_step(model: &Model, state: &ModelState, dt: f64) -> Result<ModelState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!(
            "time step must be positive, got {dt}"
        )));
    }
    rk4_signed(model, state, dt)
}

/// One RK4 step of the time-reversed system `ds/dt = −F(s)`; the returned
/// state carries `t − dt`.
pub fn rk4_step_reversed(model: &Model, state: &ModelState, dt: f64) -> Result<ModelState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!(
            "time step must be positive, got {dt}"
        )));
    }
    rk4_signed(model, state, -dt)
}

fn rk4_signed(model: &Model, state: &ModelState, h: f64) -> Result<ModelState> {
    let k1 = model.tendency(state)?;
    let k2 = model.tendency(&stage(state, 0.5 * h, &[(0.5 * h, &k1)])?)?;
    let k3 = model.tendency(&stage(state, 0.5 * h, &[(0.5 * h, &k2)])?)?;
    let k4 = model.tendency(&stage(state, h, &[(h, &k3)])?)?;
    stage(
        state,
        h,
        &[
            (h / 6.0, &k1),
            (h / 3.0, &k2),
            (h / 3.0, &k3),
            (h / 6.0, &k4),
        ],
    )
}

/// `state + Σ c_i k_i` at time `t + dt`; non-finite results are a blow-up.
fn stage(state: &ModelState, dt: f64, terms: &[(f64, &StateTendency)]) -> Result<ModelState> {
    let mut next = state.clone();
    for (c, k) in terms {
        next.axpy(*c, k);
    }
    next.t = state.t + dt;
    if !next.is_finite() {
        return Err(Error::Blowup {
            t: next.t,
            context: "non-finite coefficient in RK4 update".into(),
        });
    }
    Ok(next)
}

/// Integrates from `initial` to `run.t_end`, recording diagnostics at step 0,
/// every `diag_every` steps, and at the final time.
pub fn integrate(
    model: &Model,
    initial: &ModelState,
    run: &RunConfig,
    observer: &mut dyn Observer,
) -> Result<ModelState> {
    run.validate()?;
    initial.validate(model.grid().spec())?;
    let mut state = initial.clone();
    let mut step = 0usize;
    emit(model, &state, step, observer)?;

    while state.t < run.t_end {
        let remaining = run.t_end - state.t;
        let mut dt = match run.dt_override {
            Some(dt) => dt,
            None => cfl_dt(model, &state, run.cfl)?,
        };
        // snap onto t_end instead of leaving a sliver step
        let last = dt >= remaining * (1.0 - 1e-9);
        if last {
            dt = remaining;
        }
        state = rk4_step(model, &state, dt)?;
        step += 1;
        if last {
            state.t = run.t_end;
        }
        if step.is_multiple_of(run.diag_every) || last {
            emit(model, &state, step, observer)?;
        }
        if let Some(every) = run.snapshot_every {
            if step.is_multiple_of(every) {
                observer.snapshot(step, &state)?;
            }
        }
    }
    Ok(state)
}

fn emit(model: &Model, state: &ModelState, step: usize, observer: &mut dyn Observer) -> Result<()> {
    let record = compute_record(model.grid(), state)?;
    observer.diagnostic(step, &record, state)
}
