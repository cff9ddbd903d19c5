use std::f64::consts::PI;

use super::{check_history, DiagnosticsRecord, Tolerances};
use crate::error::Result;
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `lhs = rhs` up to a relative tolerance.
    Equality,
    /// `lhs ≤ rhs` up to a relative tolerance.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    /// Index of the record this entry was evaluated at.
    pub index: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for upper bounds, `−|lhs − rhs|` for equalities.
    pub margin: f64,
    pub tolerance: f64,
    pub kind: BoundKind,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    pub k0: f64,
    pub k0_tilde: f64,
}

/// Bound names in evaluation order.
pub const BOUND_NAMES: [&str; 12] = [
    "a_oscillator_l2",
    "b_rho_l2_growth",
    "c_linf_growth",
    "d_h1_gronwall",
    "e_rho_linf",
    "f_w1inf_gronwall",
    "g_omega_l2",
    "g_omega_l4",
    "g_omega_l8",
    "g_omega_linf",
    "h_poincare_w",
    "h_poincare_rho0",
];

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| !e.satisfied)
    }

    /// Entries of one bound, ordered by time.
    pub fn bound(&self, name: &str) -> impl Iterator<Item = &BoundEntry> + '_ {
        let name = name.to_string();
        self.entries.iter().filter(move |e| e.name == name)
    }

    /// Margin of `name` at record `index`, if evaluated.
    pub fn margin_at(&self, name: &str, index: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.index == index && e.name == name)
            .map(|e| e.margin)
    }

    pub fn names() -> &'static [&'static str] {
        &BOUND_NAMES
    }
}

/// Evaluates the energy, growth, Grönwall, vorticity-conservation and
/// Poincaré bounds at every record of `history`.
///
/// Times are measured from the first record. With diffusion the
/// conservation equalities (a) and (g) become upper bounds.
pub fn check_apriori_bounds(
    history: &[DiagnosticsRecord],
    params: &PhysicalParams,
    length: f64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    check_history(history)?;
    tol.validate()?;
    let first = &history[0];
    let t0 = first.t;
    let inv_fr = 1.0 / params.froude;
    let conserved = if params.is_viscous() {
        BoundKind::Upper
    } else {
        BoundKind::Equality
    };

    let energy0 = first.oscillator_energy();
    let k0 = length.sqrt() * inv_fr * energy0.sqrt();
    let linf0 = first.linf_w + first.linf_rho0;
    let h10 = first.h1_w + first.h1_rho0;
    let k0_tilde = 2.0 * (first.w1inf_w + first.w1inf_rho0);
    let poincare = length / (2.0 * PI);

    let mut entries = Vec::with_capacity(history.len() * BOUND_NAMES.len());
    let mut grad_integral = 0.0;
    for (index, r) in history.iter().enumerate() {
        if index > 0 {
            let prev = &history[index - 1];
            grad_integral += 0.5 * (r.t - prev.t) * (r.linf_grad_u + prev.linf_grad_u);
        }
        let t = r.t - t0;
        let mut push = |name, lhs: f64, rhs: f64, kind, tolerance: f64| {
            let (margin, scale) = match kind {
                BoundKind::Equality => (-(lhs - rhs).abs(), rhs.abs()),
                BoundKind::Upper => (rhs - lhs, rhs.abs()),
            };
            entries.push(BoundEntry {
                name,
                index,
                t: r.t,
                lhs,
                rhs,
                margin,
                tolerance,
                kind,
                satisfied: margin >= -tolerance * scale,
            });
        };

        push(
            BOUND_NAMES[0],
            r.oscillator_energy(),
            energy0,
            conserved,
            tol.equality,
        );
        push(
            BOUND_NAMES[1],
            r.l2_rho_3d,
            first.l2_rho_3d + k0 * t,
            BoundKind::Upper,
            tol.inequality,
        );
        let growth = (t * inv_fr).exp();
        push(
            BOUND_NAMES[2],
            r.linf_w + r.linf_rho0,
            linf0 * growth,
            BoundKind::Upper,
            tol.inequality,
        );
        push(
            BOUND_NAMES[3],
            r.h1_w + r.h1_rho0,
            h10 * (2.0 * grad_integral).exp(),
            BoundKind::Upper,
            tol.inequality,
        );
        push(
            BOUND_NAMES[4],
            r.linf_rho_3d,
            first.linf_rho_3d + linf0 * growth,
            BoundKind::Upper,
            tol.inequality,
        );
        push(
            BOUND_NAMES[5],
            r.w1inf_w + r.w1inf_rho0,
            k0_tilde * (grad_integral + t * inv_fr).exp(),
            BoundKind::Upper,
            tol.inequality,
        );
        let omega_checks = [
            (r.omega.l2, first.omega.l2, tol.equality),
            (r.omega.l4, first.omega.l4, tol.omega_l4),
            (r.omega.l8, first.omega.l8, tol.omega_l8),
            (r.omega.linf, first.omega.linf, tol.omega_linf),
        ];
        for (i, (lhs, rhs, tolerance)) in omega_checks.into_iter().enumerate() {
            push(BOUND_NAMES[6 + i], lhs, rhs, conserved, tolerance);
        }
        for (i, (l2, mean, h1)) in [
            (r.l2_w, r.mean_w, r.h1_w),
            (r.l2_rho0, r.mean_rho0, r.h1_rho0),
        ]
        .into_iter()
        .enumerate()
        {
            let fluct = (l2 * l2 - length * length * mean * mean).max(0.0).sqrt();
            push(
                BOUND_NAMES[10 + i],
                fluct,
                poincare * h1.sqrt(),
                BoundKind::Upper,
                tol.inequality,
            );
        }
    }
    Ok(BoundReport {
        entries,
        k0,
        k0_tilde,
    })
}
