//! Curve snapshot files: text, header `theta,S,x,y,r`, one row per grid node,
//! 17 significant digits. The support column alone determines the curve; the
//! point and radius columns are informational.

use std::fs;
use std::path::Path;

use super::{SupportCurve, ThetaGrid};
use crate::{fmt_g17, Error, Result};

pub const SNAPSHOT_HEADER: &str = "theta,S,x,y,r";

pub fn write_snapshot(curve: &SupportCurve, path: &Path) -> Result<()> {
    let points = curve.reconstruct_points();
    let radii = curve.radius_of_curvature();
    let mut out = String::with_capacity(64 * curve.grid().len());
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (i, theta) in curve.grid().nodes().enumerate() {
        out.push_str(&fmt_g17(theta));
        out.push(',');
        out.push_str(&fmt_g17(curve.values()[i]));
        out.push(',');
        out.push_str(&fmt_g17(points[i].x));
        out.push(',');
        out.push_str(&fmt_g17(points[i].y));
        out.push(',');
        out.push_str(&fmt_g17(radii[i]));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<SupportCurve> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SNAPSHOT_HEADER => {}
        other => {
            return Err(Error::InvalidSnapshot(format!(
                "expected header `{SNAPSHOT_HEADER}`, got {other:?}"
            )))
        }
    }

    let mut thetas = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::InvalidSnapshot(format!(
                "row {}: expected 5 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidSnapshot(format!("row {}: {e}", lineno + 2)))
        };
        thetas.push(parse(fields[0])?);
        values.push(parse(fields[1])?);
    }

    let grid = ThetaGrid::new(thetas.len())
        .map_err(|_| Error::InvalidSnapshot(format!("bad node count {}", thetas.len())))?;
    for (i, (&t, expect)) in thetas.iter().zip(grid.nodes()).enumerate() {
        if (t - expect).abs() > 1e-9 {
            return Err(Error::InvalidSnapshot(format!(
                "node {i}: theta {t} is not on the uniform grid"
            )));
        }
    }
    SupportCurve::new(grid, values)
        .map_err(|e| Error::InvalidSnapshot(format!("support column invalid: {e}")))
}
