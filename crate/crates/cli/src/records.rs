//! Flat CSV records. Each converts back into the library type it was built
//! from, so a table read back with `csv` loses nothing.

use betaorder::consequences::{ExceedanceRow, MonotonicityReport};
use betaorder::orders::{AffineMap, NumericCheckReport, Witness};
use betaorder::{ShapeClass, ShapeKind, SignPattern};
use serde::{Deserialize, Serialize};

/// One sample of a scan; the flag marks a step into this sample that went
/// against the claimed direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param: f64,
    pub probability: f64,
    pub violation_flag: bool,
}

impl ScanRow {
    pub const HEADER: &'static [&'static str] = &["param", "probability", "violation_flag"];

    pub fn from_report(report: &MonotonicityReport) -> Vec<ScanRow> {
        report
            .samples
            .iter()
            .enumerate()
            .map(|(i, &(param, probability))| ScanRow {
                param,
                probability,
                violation_flag: i > 0 && report.violations.contains(&(i - 1)),
            })
            .collect()
    }

    /// Samples and violation indices of the report the rows came from.
    pub fn into_parts(rows: &[ScanRow]) -> (Vec<(f64, f64)>, Vec<usize>) {
        let samples = rows.iter().map(|r| (r.param, r.probability)).collect();
        let violations = rows.iter().enumerate().filter(|(_, r)| r.violation_flag).map(|(i, _)| i - 1).collect();
        (samples, violations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub a: f64,
    pub b: f64,
    pub mean: f64,
    pub shape_kind: ShapeKind,
    pub shape_location: Option<f64>,
    pub p_over_mean: f64,
    pub p_over_mode: Option<f64>,
    pub p_over_antimode: Option<f64>,
}

impl ReportRow {
    pub const HEADER: &'static [&'static str] =
        &["a", "b", "mean", "shape_kind", "shape_location", "p_over_mean", "p_over_mode", "p_over_antimode"];
}

impl From<&ExceedanceRow> for ReportRow {
    fn from(r: &ExceedanceRow) -> Self {
        ReportRow {
            a: r.a,
            b: r.b,
            mean: r.mean,
            shape_kind: r.shape.kind,
            shape_location: r.shape.location,
            p_over_mean: r.p_over_mean,
            p_over_mode: r.p_over_mode,
            p_over_antimode: r.p_over_antimode,
        }
    }
}

impl From<ReportRow> for ExceedanceRow {
    fn from(r: ReportRow) -> Self {
        ExceedanceRow {
            a: r.a,
            b: r.b,
            mean: r.mean,
            shape: ShapeClass { kind: r.shape_kind, location: r.shape_location },
            p_over_mean: r.p_over_mean,
            p_over_mode: r.p_over_mode,
            p_over_antimode: r.p_over_antimode,
        }
    }
}

/// A numerical check with its witness spread over columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub seed: u64,
    pub lines: usize,
    pub consistent: bool,
    pub pattern_bound: SignPattern,
    pub grid_size: usize,
    pub witness_c: Option<f64>,
    pub witness_d: Option<f64>,
    pub witness_x: Option<f64>,
    pub witness_pattern: Option<SignPattern>,
}

impl VerifyRow {
    pub const HEADER: &'static [&'static str] = &[
        "seed",
        "lines",
        "consistent",
        "pattern_bound",
        "grid_size",
        "witness_c",
        "witness_d",
        "witness_x",
        "witness_pattern",
    ];

    pub fn new(report: &NumericCheckReport, seed: u64, lines: usize) -> Self {
        let w = report.witness.as_ref();
        VerifyRow {
            seed,
            lines,
            consistent: report.consistent,
            pattern_bound: report.pattern_bound,
            grid_size: report.grid_size,
            witness_c: w.map(|w| w.line.c),
            witness_d: w.map(|w| w.line.d),
            witness_x: w.map(|w| w.x),
            witness_pattern: w.map(|w| w.pattern),
        }
    }

    pub fn report(&self) -> NumericCheckReport {
        let witness = match (self.witness_c, self.witness_d, self.witness_x, self.witness_pattern) {
            (Some(c), Some(d), Some(x), Some(pattern)) => Some(Witness { line: AffineMap::new(c, d), x, pattern }),
            _ => None,
        };
        NumericCheckReport {
            consistent: self.consistent,
            witness,
            pattern_bound: self.pattern_bound,
            grid_size: self.grid_size,
        }
    }
}
