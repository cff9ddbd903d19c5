use super::{check_history, DiagnosticsRecord, ModeNorms, Tolerances};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LqNorm {
    L2,
    L4,
    Linf,
}

impl LqNorm {
    pub const ALL: [LqNorm; 3] = [LqNorm::L2, LqNorm::L4, LqNorm::Linf];

    fn of(self, m: &ModeNorms) -> f64 {
        match self {
            LqNorm::L2 => m.l2,
            LqNorm::L4 => m.l4,
            LqNorm::Linf => m.linf,
        }
    }

    fn tolerance(self, tol: &Tolerances) -> f64 {
        match self {
            LqNorm::L2 => tol.modal_l2,
            LqNorm::L4 => tol.modal_l4,
            LqNorm::Linf => tol.modal_linf,
        }
    }
}

/// Worst drift of one `(k, q)` pair over the history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalEntry {
    pub k: usize,
    pub q: LqNorm,
    pub initial: f64,
    /// `max_t |N(t)/N(0) − 1|`, or the absolute drift when `N(0) = 0`.
    pub drift: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalReport {
    pub entries: Vec<ModalEntry>,
}

impl ModalReport {
    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|e| e.satisfied)
    }

    pub fn max_drift(&self, q: LqNorm) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.q == q)
            .map(|e| e.drift)
            .fold(0.0, f64::max)
    }
}

/// Checks that every recorded `‖ρ_k‖_{L^q}`, `k ≥ 1`, keeps its initial value.
pub fn modal_lq_conservation_check(
    history: &[DiagnosticsRecord],
    norms: &[LqNorm],
    tol: &Tolerances,
) -> Result<ModalReport> {
    check_history(history)?;
    let kmax = history[0].rho_modes.len();
    if history.iter().any(|r| r.rho_modes.len() != kmax) {
        return Err(Error::Input(
            "records disagree on the number of vertical modes".into(),
        ));
    }
    let mut entries = Vec::new();
    for k in 1..=kmax {
        for &q in norms {
            let initial = q.of(&history[0].rho_modes[k - 1]);
            let drift = history
                .iter()
                .map(|r| {
                    let v = q.of(&r.rho_modes[k - 1]);
                    if initial > 0.0 {
                        (v / initial - 1.0).abs()
                    } else {
                        v.abs()
                    }
                })
                .fold(0.0, f64::max);
            let tolerance = q.tolerance(tol);
            entries.push(ModalEntry {
                k,
                q,
                initial,
                drift,
                tolerance,
                satisfied: drift <= tolerance,
            });
        }
    }
    Ok(ModalReport { entries })
}
