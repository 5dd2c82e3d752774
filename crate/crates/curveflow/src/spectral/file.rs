//! Spectral state files: text, header `n,a,b`, one row per mode. Row 0 holds
//! `(L, A)` in the `a, b` columns; 17 significant digits throughout.

use std::fs;
use std::path::Path;

use super::FourierSupport;
use crate::{fmt_g17, Error, Result};

pub const SPECTRAL_HEADER: &str = "n,a,b";

pub fn write_spectral_file(fs_state: &FourierSupport, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(SPECTRAL_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "0,{},{}\n",
        fmt_g17(fs_state.length()),
        fmt_g17(fs_state.area())
    ));
    for n in 1..=fs_state.n_modes() {
        let (a, b) = fs_state.mode(n);
        out.push_str(&format!("{n},{},{}\n", fmt_g17(a), fmt_g17(b)));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_spectral_file(path: &Path) -> Result<FourierSupport> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SPECTRAL_HEADER => {}
        other => {
            return Err(Error::InvalidSnapshot(format!(
                "expected header `{SPECTRAL_HEADER}`, got {other:?}"
            )))
        }
    }
    let mut mean = None;
    let mut modes = Vec::new();
    let mut max_n = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::InvalidSnapshot(format!(
                "row {}: expected 3 fields",
                lineno + 2
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidSnapshot(format!("row {}: {e}", lineno + 2)))
        };
        let n: usize = fields[0]
            .trim()
            .parse()
            .map_err(|e| Error::InvalidSnapshot(format!("row {}: {e}", lineno + 2)))?;
        let a = parse(fields[1])?;
        let b = parse(fields[2])?;
        if n == 0 {
            mean = Some(a / (2.0 * std::f64::consts::PI));
            let _ = b; // area row entry; re-derived from the identity
        } else {
            max_n = max_n.max(n);
            modes.push((n, a, b));
        }
    }
    let mean = mean.ok_or_else(|| Error::InvalidSnapshot("missing n = 0 row".into()))?;
    FourierSupport::from_modes(mean, &modes, max_n.max(1))
}
