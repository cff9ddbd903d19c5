use super::{check_history, DiagnosticsRecord};
use crate::error::Result;
use crate::model::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEntry {
    pub t: f64,
    pub mean_w: f64,
    pub mean_rho0: f64,
    pub expected_w: f64,
    pub expected_rho0: f64,
    /// Larger of the two absolute deviations.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanReport {
    pub entries: Vec<MeanEntry>,
    pub max_error: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

/// Compares the recorded means with the exact rotation
/// `w̄(t) = w̄₀ cos(t/Fr) − ρ̄₀ sin(t/Fr)`, `ρ̄(t) = ρ̄₀ cos(t/Fr) + w̄₀ sin(t/Fr)`.
///
/// Zero initial means must stay zero, which is the same statement.
pub fn mean_evolution_check(
    history: &[DiagnosticsRecord],
    params: &PhysicalParams,
    tolerance: f64,
) -> Result<MeanReport> {
    check_history(history)?;
    let first = &history[0];
    let (w0, r0) = (first.mean_w, first.mean_rho0);
    let entries: Vec<MeanEntry> = history
        .iter()
        .map(|r| {
            let phase = (r.t - first.t) / params.froude;
            let (s, c) = phase.sin_cos();
            let expected_w = w0 * c - r0 * s;
            let expected_rho0 = r0 * c + w0 * s;
            MeanEntry {
                t: r.t,
                mean_w: r.mean_w,
                mean_rho0: r.mean_rho0,
                expected_w,
                expected_rho0,
                error: (r.mean_w - expected_w)
                    .abs()
                    .max((r.mean_rho0 - expected_rho0).abs()),
            }
        })
        .collect();
    let max_error = entries.iter().map(|e| e.error).fold(0.0, f64::max);
    Ok(MeanReport {
        entries,
        max_error,
        tolerance,
        satisfied: max_error <= tolerance,
    })
}
