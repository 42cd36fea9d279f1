//! Report types and serialization. JSON output is byte-stable for a fixed
//! scenario and seed apart from `runtime_seconds`; CSV output is a long-form
//! per-point table with exactly one row per (point, check) pair.

use serde::Serialize;
use std::io::{self, Write};

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub sector: String,
    /// points actually evaluated
    pub points: usize,
    pub skipped: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub overall_pass: bool,
    pub runtime_seconds: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One CSV row; `None` residuals mark a skipped (point, check) pair.
#[derive(Debug, Clone)]
pub struct PointRow {
    pub point: [f64; 4],
    pub check: String,
    pub abs: Option<f64>,
    pub rel: Option<f64>,
}

/// Long-form CSV: coordinate columns named after the chart, then the check id
/// and both residuals. Skipped rows keep empty residual cells and a `skipped`
/// status so the row count stays points x checks.
pub fn write_csv<W: Write>(w: &mut W, coord_names: &[String], rows: &[PointRow]) -> io::Result<()> {
    writeln!(
        w,
        "{},check,abs_residual,rel_residual,status",
        coord_names.join(",")
    )?;
    for row in rows {
        let [a, b, c, d] = row.point;
        match (row.abs, row.rel) {
            (Some(abs), Some(rel)) => {
                writeln!(w, "{a},{b},{c},{d},{},{abs},{rel},ok", row.check)?
            }
            _ => writeln!(w, "{a},{b},{c},{d},{},,,skipped", row.check)?,
        }
    }
    Ok(())
}
