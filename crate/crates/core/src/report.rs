//! CSV reports: one long-form table with a row per (image, method), plus one
//! pivot table per metric with images as rows and methods as columns.
//!
//! Real values are written with six significant digits. Identical-image PSNR
//! is written as `inf`; metrics undefined for an image pair as `nan`; rows
//! whose image failed carry an `error` and leave the metric columns empty.

use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::methods::MethodId;
use crate::metrics::MetricsReport;

/// One (image, method) result.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub image_id: String,
    pub method: MethodId,
    pub metrics: Option<MetricsReport>,
    pub thresholds: Vec<u8>,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

/// Long-form report header.
pub const REPORT_HEADER: [&str; 12] = [
    "image_id",
    "method",
    "ambe",
    "sd",
    "entropy",
    "psnr",
    "uiqi",
    "eme_error",
    "ssim",
    "thresholds",
    "runtime_ms",
    "error",
];

/// Formats like C's `%.6g`: six significant digits, trailing zeros trimmed,
/// exponent form outside `[1e-5, 1e6)`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    const DIGITS: i32 = 6;
    // Round to the target precision first; rounding can bump the exponent.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn metric_cell(v: Option<f64>) -> String {
    format_real(v.unwrap_or(f64::NAN))
}

/// Thresholds joined with `;` (empty when there are none).
pub fn format_thresholds(t: &[u8]) -> String {
    t.iter().map(u8::to_string).collect::<Vec<_>>().join(";")
}

impl ReportRow {
    /// Cells in [`REPORT_HEADER`] order.
    pub fn record(&self) -> Vec<String> {
        let mut cells = vec![self.image_id.clone(), self.method.name().to_string()];
        match &self.metrics {
            Some(m) => cells.extend(m.values().map(metric_cell)),
            None => cells.extend(std::iter::repeat_n(String::new(), 7)),
        }
        cells.push(format_thresholds(&self.thresholds));
        cells.push(format_real(self.runtime_ms));
        cells.push(self.error.clone().unwrap_or_default());
        cells
    }

    fn metric(&self, column: usize) -> String {
        match &self.metrics {
            Some(m) => metric_cell(m.values()[column]),
            None => String::new(),
        }
    }
}

/// Sorts rows by (image id, method name), the canonical report order.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        (a.image_id.as_str(), a.method.name()).cmp(&(b.image_id.as_str(), b.method.name()))
    });
}

/// Serializes the long-form report.
pub fn write_report_csv<W: std::io::Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes the pivot table of metric `column` (index into
/// [`MetricsReport::COLUMNS`]), with one column per entry of `methods`.
pub fn write_pivot_csv<W: std::io::Write>(
    rows: &[ReportRow],
    methods: &[MethodId],
    column: usize,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["image_id".to_string()];
    header.extend(methods.iter().map(|m| m.name().to_string()));
    w.write_record(&header)?;

    let mut image_ids: Vec<&str> = rows.iter().map(|r| r.image_id.as_str()).collect();
    image_ids.sort_unstable();
    image_ids.dedup();
    for id in image_ids {
        let mut record = vec![id.to_string()];
        for &m in methods {
            let cell = rows
                .iter()
                .find(|r| r.image_id == id && r.method == m)
                .map(|r| r.metric(column))
                .unwrap_or_default();
            record.push(cell);
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes one metrics report as a header line plus one data line.
pub fn write_metrics_csv<W: std::io::Write>(m: &MetricsReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MetricsReport::COLUMNS)?;
    w.write_record(m.values().map(metric_cell))?;
    w.flush()?;
    Ok(())
}

/// Path of the pivot file for `metric` next to `report`: `dir/stem_metric.csv`.
pub fn pivot_path(report: &Path, metric: &str) -> PathBuf {
    let stem = report
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}_{metric}.csv"))
}

/// Writes the long-form report at `path` and the seven pivot tables beside it.
/// Returns every path written, report first.
pub fn write_reports(rows: &[ReportRow], methods: &[MethodId], path: &Path) -> Result<Vec<PathBuf>> {
    let mut written = vec![path.to_path_buf()];
    write_report_csv(rows, std::fs::File::create(path)?)?;
    for (column, metric) in MetricsReport::COLUMNS.iter().enumerate() {
        let pivot = pivot_path(path, metric);
        write_pivot_csv(rows, methods, column, std::fs::File::create(&pivot)?)?;
        written.push(pivot);
    }
    Ok(written)
}
