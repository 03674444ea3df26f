//! CSV and JSON output for sweeps.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::scans::SweepReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "lambda,p,q,W,Z,converged";

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

/// One row per `(λ, p)` cell. `Z` does not depend on `p` and is repeated on
/// each row of its `λ`; when the sweep has no `p` grid there is one row per `λ`
/// with `p` and `q` left empty.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (i, &lambda) in report.lambda_grid.iter().enumerate() {
        let z = report.z_values.get(i).copied().flatten();
        if report.p_grid.is_empty() {
            let _ = writeln!(out, "{lambda:.16e},,,,{},{}", fmt_opt(z), z.is_some());
            continue;
        }
        for (j, &p) in report.p_grid.iter().enumerate() {
            let w = report.w_values[i][j];
            let q = p / (p - 1.0);
            let converged = w.is_some() && (z.is_some() || !has_z(report));
            let _ = writeln!(
                out,
                "{lambda:.16e},{p:.16e},{q:.16e},{},{},{converged}",
                fmt_opt(w),
                fmt_opt(z)
            );
        }
    }
    out
}

fn has_z(report: &SweepReport) -> bool {
    report.z_values.iter().any(Option::is_some)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Config(format!("cannot serialize report: {e}")))
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Config(format!("{}: {e}", parent.display())))?;
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
