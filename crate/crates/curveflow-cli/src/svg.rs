//! Display-only SVG overlay of the recorded curves: opacity ramps up with
//! time and the limiting circle of radius `L_final/2π` is drawn dashed
//! around the frozen translation center.

use std::f64::consts::PI;
use std::path::Path;

use curveflow::solver::FlowState;
use curveflow::Result;

pub fn write_curve_overlay(states: &[FlowState], path: &Path) -> Result<()> {
    let polylines: Vec<Vec<(f64, f64)>> = states
        .iter()
        .map(|s| s.curve.reconstruct_points().iter().map(|p| (p.x, -p.y)).collect())
        .collect();

    let (mut min_x, mut min_y, mut max_x, mut max_y) =
        (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for line in &polylines {
        for &(x, y) in line {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
    }
    let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1e-9);
    let (min_x, min_y) = (min_x - pad, min_y - pad);
    let (w, h) = (max_x - min_x + 2.0 * pad, max_y - min_y + 2.0 * pad);
    let stroke = 0.004 * w.max(h);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x:.6} {min_y:.6} {w:.6} {h:.6}\">\n"
    ));
    let n = polylines.len();
    for (i, line) in polylines.iter().enumerate() {
        let opacity = if n > 1 {
            0.15 + 0.85 * i as f64 / (n - 1) as f64
        } else {
            1.0
        };
        let points: Vec<String> = line.iter().map(|(x, y)| format!("{x:.6},{y:.6}")).collect();
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"#20639b\" \
             stroke-width=\"{stroke:.6}\" stroke-opacity=\"{opacity:.3}\"/>\n",
            points.join(" ")
        ));
    }

    if let Some(last) = states.last() {
        // The translation harmonics are frozen by the flow, so the limit
        // circle sits at (-a1, -b1) of the final curve.
        let g = last.curve.grid();
        let hstep = g.spacing();
        let mut a1 = 0.0;
        let mut b1 = 0.0;
        for (t, &s) in g.nodes().zip(last.curve.values()) {
            a1 += s * t.cos();
            b1 += s * t.sin();
        }
        a1 *= hstep / PI;
        b1 *= hstep / PI;
        let radius = last.quantities.length / (2.0 * PI);
        out.push_str(&format!(
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{radius:.6}\" fill=\"none\" \
             stroke=\"#d1495b\" stroke-width=\"{stroke:.6}\" stroke-dasharray=\"{:.6} {:.6}\"/>\n",
            -a1,
            b1,
            3.0 * stroke,
            2.0 * stroke
        ));
    }
    out.push_str("</svg>\n");
    std::fs::write(path, out)?;
    Ok(())
}
