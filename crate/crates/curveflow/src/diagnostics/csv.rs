//! `diagnostics.csv` and comparison-report emission: fixed headers, one row
//! per record, 17 significant digits, newline-terminated.

use std::fs;
use std::path::Path;

use super::{ComparisonRow, DiagnosticsRecord};
use crate::{fmt_g17, Error, Result};

pub const DIAGNOSTICS_HEADER: &str =
    "tau,L,A,alpha,deficit,k_min,k_max,r_in,pan_yang,bonnesen,closure_cos,closure_sin,conv_kr,conv_k2piL";

pub const COMPARISON_HEADER: &str = "tau,sup_err,L_err,A_err";

pub fn write_diagnostics_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    let mut out = String::with_capacity(records.len() * 300);
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            r.tau,
            r.length,
            r.area,
            r.alpha,
            r.deficit,
            r.k_min,
            r.k_max,
            r.inradius,
            r.pan_yang,
            r.bonnesen,
            r.closure_cos,
            r.closure_sin,
            r.conv_kr,
            r.conv_k2pi_l,
        ];
        let row: Vec<String> = fields.iter().map(|&v| fmt_g17(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_diagnostics_csv(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == DIAGNOSTICS_HEADER => {}
        other => {
            return Err(Error::InvalidSnapshot(format!(
                "expected diagnostics header, got {other:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidSnapshot(format!("row {}: {e}", lineno + 2)))
            })
            .collect::<Result<_>>()?;
        if fields.len() != 14 {
            return Err(Error::InvalidSnapshot(format!(
                "row {}: expected 14 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        records.push(DiagnosticsRecord {
            tau: fields[0],
            length: fields[1],
            area: fields[2],
            alpha: fields[3],
            deficit: fields[4],
            k_min: fields[5],
            k_max: fields[6],
            inradius: fields[7],
            pan_yang: fields[8],
            bonnesen: fields[9],
            closure_cos: fields[10],
            closure_sin: fields[11],
            conv_kr: fields[12],
            conv_k2pi_l: fields[13],
        });
    }
    Ok(records)
}

pub fn write_comparison_csv(rows: &[ComparisonRow], path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(COMPARISON_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g17(r.tau),
            fmt_g17(r.sup_err),
            fmt_g17(r.length_err),
            fmt_g17(r.area_err)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}
