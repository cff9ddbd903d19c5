//! Norms, invariant ledgers and a-priori bound checks.
//!
//! All norms are integrals over the periodic box, not grid averages: for a
//! horizontal field `‖f‖_{L²(T²)} = L·(Σ|c|²)^{1/2}`, and the 3D density norms
//! carry the extra vertical period. `L^p` norms with finite `p ≠ 2` use the
//! collocation quadrature `(L²/N Σ|f|^p)^{1/p}`; sup-norms are grid maxima.

mod bounds;
mod convergence;
mod means;
mod modal;
mod twin;

pub use bounds::{check_apriori_bounds, BoundEntry, BoundKind, BoundReport, BOUND_NAMES};
pub use convergence::{convergence_study, max_difference, oscillator_exact, ConvergenceReport};
pub use means::{mean_evolution_check, MeanEntry, MeanReport};
pub use modal::{modal_lq_conservation_check, LqNorm, ModalEntry, ModalReport};
pub use twin::{continuous_dependence_distance, twin_experiment, TwinResult};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::ModelState;
use crate::spectral::{Grid, SpectralField2D};
use crate::timestepper::Observer;

/// Tolerances used by every check in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance of the equality bounds (a) and (g) at `p = 2`.
    pub equality: f64,
    /// Inequality bounds pass when `margin ≥ −inequality·|rhs|`.
    pub inequality: f64,
    pub omega_l4: f64,
    pub omega_l8: f64,
    pub omega_linf: f64,
    /// Absolute tolerance of the mean rotation check.
    pub mean: f64,
    pub modal_l2: f64,
    pub modal_l4: f64,
    pub modal_linf: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: 1e-8,
            inequality: 1e-6,
            omega_l4: 1e-4,
            omega_l8: 1e-3,
            omega_linf: 1e-2,
            mean: 1e-10,
            modal_l2: 1e-8,
            modal_l4: 1e-4,
            modal_linf: 5e-2,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("equality", self.equality),
            ("inequality", self.inequality),
            ("omega_l4", self.omega_l4),
            ("omega_l8", self.omega_l8),
            ("omega_linf", self.omega_linf),
            ("mean", self.mean),
            ("modal_l2", self.modal_l2),
            ("modal_l4", self.modal_l4),
            ("modal_linf", self.modal_linf),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "tolerance {name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Vorticity `L^p` norms for the tracked exponents.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OmegaNorms {
    pub l2: f64,
    pub l4: f64,
    pub l8: f64,
    pub linf: f64,
}

/// Horizontal norms of one vertical mode `ρ_k`, `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeNorms {
    pub l2: f64,
    pub l4: f64,
    pub linf: f64,
}

/// Every norm tracked at one diagnostic time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2_w: f64,
    pub l2_rho0: f64,
    pub linf_w: f64,
    pub linf_rho0: f64,
    /// Squared seminorm `‖∇_h w‖²_{L²}`.
    pub h1_w: f64,
    pub h1_rho0: f64,
    /// Grid maximum of `|∇_h w|`.
    pub w1inf_w: f64,
    pub w1inf_rho0: f64,
    pub l2_rho_3d: f64,
    pub linf_rho_3d: f64,
    pub omega: OmegaNorms,
    /// Grid maximum of the Frobenius norm of `∇_h u_h`.
    pub linf_grad_u: f64,
    pub mean_w: f64,
    pub mean_rho0: f64,
    /// Norms of `ρ_1 … ρ_K`.
    pub rho_modes: Vec<ModeNorms>,
}

impl DiagnosticsRecord {
    /// Column names and values in CSV order.
    pub fn columns(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = [
            ("t", self.t),
            ("l2_w", self.l2_w),
            ("l2_rho0", self.l2_rho0),
            ("linf_w", self.linf_w),
            ("linf_rho0", self.linf_rho0),
            ("h1_w", self.h1_w),
            ("h1_rho0", self.h1_rho0),
            ("w1inf_w", self.w1inf_w),
            ("w1inf_rho0", self.w1inf_rho0),
            ("l2_rho_3d", self.l2_rho_3d),
            ("linf_rho_3d", self.linf_rho_3d),
            ("lp_omega_2", self.omega.l2),
            ("lp_omega_4", self.omega.l4),
            ("lp_omega_8", self.omega.l8),
            ("lp_omega_inf", self.omega.linf),
            ("linf_grad_u", self.linf_grad_u),
            ("mean_w", self.mean_w),
            ("mean_rho0", self.mean_rho0),
        ]
        .into_iter()
        .map(|(n, v)| (n.to_string(), v))
        .collect();
        for (i, m) in self.rho_modes.iter().enumerate() {
            let k = i + 1;
            out.push((format!("rho{k}_l2"), m.l2));
            out.push((format!("rho{k}_l4"), m.l4));
            out.push((format!("rho{k}_linf"), m.linf));
        }
        out
    }

    /// Oscillator energy `‖w‖² + ‖ρ_0‖²`.
    pub fn oscillator_energy(&self) -> f64 {
        self.l2_w * self.l2_w + self.l2_rho0 * self.l2_rho0
    }
}

/// Evaluates every tracked norm of `state`.
pub fn compute_record(grid: &Grid, state: &ModelState) -> Result<DiagnosticsRecord> {
    let l = grid.length();
    let l2 = |f: &SpectralField2D| l * f.mean_square().sqrt();
    let w_real = grid.to_real(&state.w)?;
    let rho0_real = grid.to_real(state.rho0())?;
    let omega_real = grid.to_real(&state.omega)?;
    let (h1_w, w1inf_w) = gradient_norms(grid, &state.w)?;
    let (h1_rho0, w1inf_rho0) = gradient_norms(grid, state.rho0())?;

    let l3 = l * l * l;
    let rho_energy: f64 = state
        .rho
        .modes()
        .iter()
        .enumerate()
        .map(|(k, m)| if k == 0 { 1.0 } else { 2.0 } * m.mean_square())
        .sum();
    let linf_rho_3d = grid
        .reconstruct_levels(&state.rho)?
        .iter()
        .map(|f| f.max_abs())
        .fold(0.0, f64::max);

    let omega_vals = omega_real.values();
    let omega = OmegaNorms {
        l2: l2(&state.omega),
        l4: quadrature_lp(omega_vals.iter().map(|v| v.abs()), 4, l),
        l8: quadrature_lp(omega_vals.iter().map(|v| v.abs()), 8, l),
        linf: omega_real.max_abs(),
    };

    let rho_modes = state.rho.modes()[1..]
        .iter()
        .map(|m| {
            let phys = grid.to_physical_complex(m)?;
            Ok(ModeNorms {
                l2: l2(m),
                l4: quadrature_lp(phys.iter().map(|c| c.norm()), 4, l),
                linf: phys.iter().map(|c| c.norm()).fold(0.0, f64::max),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DiagnosticsRecord {
        t: state.t,
        l2_w: l2(&state.w),
        l2_rho0: l2(state.rho0()),
        linf_w: w_real.max_abs(),
        linf_rho0: rho0_real.max_abs(),
        h1_w,
        h1_rho0,
        w1inf_w,
        w1inf_rho0,
        l2_rho_3d: (l3 * rho_energy).sqrt(),
        linf_rho_3d,
        omega,
        linf_grad_u: grad_u_max(grid, state)?,
        mean_w: state.w.mean().re,
        mean_rho0: state.rho0().mean().re,
        rho_modes,
    })
}

/// `(‖∇f‖²_{L²}, max |∇f|)`.
fn gradient_norms(grid: &Grid, f: &SpectralField2D) -> Result<(f64, f64)> {
    let grad = grid.gradient_h(f)?;
    let l = grid.length();
    let h1 = l * l * (grad.u.mean_square() + grad.v.mean_square());
    let gx = grid.to_real(&grad.u)?;
    let gy = grid.to_real(&grad.v)?;
    let max = gx
        .values()
        .iter()
        .zip(gy.values())
        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
    Ok((h1, max))
}

fn grad_u_max(grid: &Grid, state: &ModelState) -> Result<f64> {
    let vel = grid.biot_savart(&state.omega)?;
    let du = grid.gradient_h(&vel.u)?;
    let dv = grid.gradient_h(&vel.v)?;
    let parts = [
        grid.to_real(&du.u)?,
        grid.to_real(&du.v)?,
        grid.to_real(&dv.u)?,
        grid.to_real(&dv.v)?,
    ];
    let n = parts[0].values().len();
    Ok((0..n)
        .map(|p| {
            parts
                .iter()
                .map(|f| f.values()[p].powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max))
}

/// `(L²/N Σ a^p)^{1/p}` for nonnegative samples `a`.
fn quadrature_lp(abs: impl ExactSizeIterator<Item = f64>, p: i32, l: f64) -> f64 {
    let n = abs.len() as f64;
    let sum: f64 = abs.map(|a| a.powi(p)).sum();
    (l * l * sum / n).powf(1.0 / p as f64)
}

/// Collects every record emitted during a run.
#[derive(Debug, Clone, Default)]
pub struct History {
    pub records: Vec<DiagnosticsRecord>,
}

impl Observer for History {
    fn diagnostic(
        &mut self,
        _step: usize,
        record: &DiagnosticsRecord,
        _state: &ModelState,
    ) -> Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
}

/// Rejects empty or non-increasing histories.
pub(crate) fn check_history(history: &[DiagnosticsRecord]) -> Result<()> {
    if history.is_empty() {
        return Err(Error::Input("empty diagnostic history".into()));
    }
    for pair in history.windows(2) {
        if pair[1].t.partial_cmp(&pair[0].t) != Some(Ordering::Greater) {
            return Err(Error::Input(format!(
                "history not time-ordered: t = {} follows t = {}",
                pair[1].t, pair[0].t
            )));
        }
    }
    Ok(())
}
