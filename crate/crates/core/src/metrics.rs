//! Dice and IoU scoring, per-image evaluation records, and the aggregated
//! with/without report.
//!
//! Conventions that change numbers, fixed here once: two empty masks score
//! 1.0 (an empty prediction of an empty truth is perfect); aggregation is an
//! unweighted mean over images, not a pooled pixel count; the percent column
//! is computed from unrounded means and only rounded for display (scores and
//! increase to 3 decimals, percent to 2).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mask_io::BinaryMask;
use crate::pipeline::{self, PipelineConfig};

/// Per-image scores with and without hull post-processing.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub image_id: String,
    pub dice_without: f64,
    pub dice_with: f64,
    pub iou_without: f64,
    pub iou_with: f64,
}

/// One aggregated report row (Dice means over a set of images).
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub model_tag: String,
    pub split_tag: String,
    pub mean_without: f64,
    pub mean_with: f64,
    pub increase: f64,
    pub increase_pct: f64,
}

fn overlap_counts(a: &BinaryMask, b: &BinaryMask) -> Result<(u64, u64, u64)> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let mut inter = 0u64;
    for (pa, pb) in a.data().iter().zip(b.data()) {
        if *pa && *pb {
            inter += 1;
        }
    }
    Ok((inter, a.count_foreground(), b.count_foreground()))
}

/// Dice overlap 2|A∩B| / (|A|+|B|). Both masks empty scores 1.0.
pub fn dice(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    let (inter, na, nb) = overlap_counts(a, b)?;
    if na + nb == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * inter as f64 / (na + nb) as f64)
}

/// Jaccard overlap |A∩B| / |A∪B|. Both masks empty scores 1.0.
pub fn iou(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    let (inter, na, nb) = overlap_counts(a, b)?;
    let union = na + nb - inter;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

/// Scores a prediction against ground truth, before and after running the
/// hull pipeline on the prediction.
pub fn evaluate_pair(
    image_id: impl Into<String>,
    pred: &BinaryMask,
    gt: &BinaryMask,
    config: &PipelineConfig,
) -> Result<EvalRecord> {
    let dice_without = dice(pred, gt)?;
    let iou_without = iou(pred, gt)?;
    let processed = pipeline::covhuseg(pred, config)?;
    Ok(EvalRecord {
        image_id: image_id.into(),
        dice_without,
        dice_with: dice(&processed, gt)?,
        iou_without,
        iou_with: iou(&processed, gt)?,
    })
}

/// Folds per-image records into one report row of Dice means. The percent
/// column is 0 when the without-mean is 0 (nothing to improve relative to).
pub fn aggregate(records: &[EvalRecord], model_tag: &str, split_tag: &str) -> Result<ReportRow> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let n = records.len() as f64;
    let mean_without = records.iter().map(|r| r.dice_without).sum::<f64>() / n;
    let mean_with = records.iter().map(|r| r.dice_with).sum::<f64>() / n;
    let increase = mean_with - mean_without;
    let increase_pct = if mean_without > 0.0 {
        100.0 * increase / mean_without
    } else {
        0.0
    };
    Ok(ReportRow {
        model_tag: model_tag.to_string(),
        split_tag: split_tag.to_string(),
        mean_without,
        mean_with,
        increase,
        increase_pct,
    })
}

const REPORT_HEADER: [&str; 6] = [
    "model",
    "split",
    "without",
    "with",
    "increase",
    "increase_pct",
];

fn row_cells(row: &ReportRow) -> [String; 6] {
    [
        row.model_tag.clone(),
        row.split_tag.clone(),
        format!("{:.3}", row.mean_without),
        format!("{:.3}", row.mean_with),
        format!("{:.3}", row.increase),
        format!("{:.2}", row.increase_pct),
    ]
}

/// Serializes rows as CSV with the display rounding, LF line endings.
pub fn report_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    out.push_str(&REPORT_HEADER.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row_cells(row).join(","));
        out.push('\n');
    }
    out
}

/// Writes [`report_to_csv`] output to a file.
pub fn write_report_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    std::fs::write(path, report_to_csv(rows)).map_err(|e| Error::io(path, e))
}

/// Reads a report CSV produced by [`write_report_csv`] (or shaped like one).
pub fn read_report_csv(path: &Path) -> Result<Vec<ReportRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == REPORT_HEADER.join(",") => {}
        Some((_, header)) => {
            return Err(Error::InvalidReport {
                path: path.to_path_buf(),
                line: 1,
                reason: format!("unexpected header `{header}`"),
            });
        }
        None => {
            return Err(Error::InvalidReport {
                path: path.to_path_buf(),
                line: 1,
                reason: "empty file".to_string(),
            });
        }
    }
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::InvalidReport {
                path: path.to_path_buf(),
                line: idx as u64 + 1,
                reason: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            fields[i].parse().map_err(|_| Error::InvalidReport {
                path: path.to_path_buf(),
                line: idx as u64 + 1,
                reason: format!("`{}` is not a number", fields[i]),
            })
        };
        rows.push(ReportRow {
            model_tag: fields[0].to_string(),
            split_tag: fields[1].to_string(),
            mean_without: num(2)?,
            mean_with: num(3)?,
            increase: num(4)?,
            increase_pct: num(5)?,
        });
    }
    Ok(rows)
}

/// Renders rows as an aligned plain-text table, one row per model and split.
pub fn render_report_table(rows: &[ReportRow]) -> String {
    let headers = ["Model", "Split", "Without", "With", "Increase", "Increase%"];
    let cells: Vec<[String; 6]> = rows.iter().map(row_cells).collect();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |row: &[String]| {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i < 2 {
                // text columns left-aligned, numeric right-aligned
                let _ = write!(out, "{:<width$}", cell, width = widths[i]);
            } else {
                let _ = write!(out, "{:>width$}", cell, width = widths[i]);
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    line(&headers.map(String::from));
    for row in &cells {
        line(row);
    }
    out
}
