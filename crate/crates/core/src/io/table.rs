//! CSV output. Every value is written as `{:.16e}`, which round-trips f64.

use std::fs::File;
use std::path::Path;

use crate::diagnostics::{BoundReport, DiagnosticsRecord, TwinResult};
use crate::error::{Error, Result};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        other => Error::Input(format!("{}: {other:?}", path.display())),
    }
}

/// One row per record; with a report, one `margin_<bound>` column per bound.
pub fn write_diagnostics_csv(
    records: &[DiagnosticsRecord],
    report: Option<&BoundReport>,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = csv::Writer::from_writer(file);
    let bounds = if report.is_some() {
        BoundReport::names()
    } else {
        &[]
    };
    if let Some(first) = records.first() {
        let mut header: Vec<String> = first.columns().into_iter().map(|(n, _)| n).collect();
        header.extend(bounds.iter().map(|b| format!("margin_{b}")));
        out.write_record(&header).map_err(|e| csv_error(path, e))?;
    }
    for (i, r) in records.iter().enumerate() {
        let mut row: Vec<String> = r.columns().into_iter().map(|(_, v)| fmt(v)).collect();
        if let Some(rep) = report {
            for b in bounds {
                row.push(rep.margin_at(b, i).map(fmt).unwrap_or_default());
            }
        }
        out.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// `t, D` rows of a twin run.
pub fn write_twin_csv(result: &TwinResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = csv::Writer::from_writer(file);
    out.write_record(["t", "distance"])
        .map_err(|e| csv_error(path, e))?;
    for (t, d) in result.times.iter().zip(&result.distances) {
        out.write_record([fmt(*t), fmt(*d)])
            .map_err(|e| csv_error(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
