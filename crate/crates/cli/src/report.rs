//! `report`: render a report CSV as an aligned text table, optionally
//! checking that each row's increase columns agree with its means.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use covhuseg::metrics::{self, ReportRow};

use crate::Outcome;
use crate::common::ConfigMap;

/// Rounding slack for the increase column: both means carry three printed
/// decimals, so their difference is trustworthy to one unit in the third.
const INCREASE_TOLERANCE: f64 = 1e-3 + 1e-9;

/// Rounding slack for the percent column: one unit in the second decimal,
/// as printed.
const PERCENT_TOLERANCE: f64 = 0.1 + 1e-9;

#[derive(Args)]
pub struct ReportArgs {
    /// Report CSV to read
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    /// Also write the rendered table to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Check increase and percent columns against the means in each row
    #[arg(long)]
    check: bool,
}

pub fn run(args: &ReportArgs, _config: &ConfigMap) -> Result<Outcome> {
    let rows = metrics::read_report_csv(&args.input)?;
    let table = metrics::render_report_table(&rows);
    print!("{table}");
    if let Some(out) = &args.out {
        fs::write(out, &table).with_context(|| format!("writing table to {}", out.display()))?;
    }
    if !args.check {
        return Ok(Outcome::Success);
    }
    let mut mismatches = 0usize;
    for (idx, row) in rows.iter().enumerate() {
        for complaint in check_row(row) {
            mismatches += 1;
            eprintln!(
                "row {} ({} {}): {complaint}",
                idx + 1,
                row.model_tag,
                row.split_tag
            );
        }
    }
    if mismatches > 0 {
        eprintln!("{mismatches} arithmetic mismatches in {} rows", rows.len());
        Ok(Outcome::Partial)
    } else {
        println!("checked {} rows: increase columns consistent", rows.len());
        Ok(Outcome::Success)
    }
}

/// Validates one row's derived columns against its means, as printed: the
/// increase must match with-minus-without, and the percent must match the
/// increase column relative to the without mean, rounded to two decimals.
fn check_row(row: &ReportRow) -> Vec<String> {
    let mut complaints = Vec::new();
    let diff = row.mean_with - row.mean_without;
    if (diff - row.increase).abs() > INCREASE_TOLERANCE {
        complaints.push(format!(
            "increase {:.3} differs from with-without {:.3}",
            row.increase, diff
        ));
    }
    let expected_pct = if row.mean_without == 0.0 {
        0.0
    } else {
        round2(100.0 * row.increase / row.mean_without)
    };
    if (expected_pct - row.increase_pct).abs() > PERCENT_TOLERANCE {
        complaints.push(format!(
            "increase_pct {:.2} differs from recomputed {expected_pct:.2}",
            row.increase_pct
        ));
    }
    complaints
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
