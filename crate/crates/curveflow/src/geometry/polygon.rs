//! Polygon ingestion: support-function sampling plus harmonic smoothing.
//!
//! Polygon support functions carry corner singularities (their curvature is a
//! sum of point masses), so the raw samples must be band-limited before they
//! can feed a flow. Modes above `⌊M/3⌋` are always discarded. A plain
//! truncation is spectrally accurate and is tried first; for coarse polygons
//! its Gibbs undershoot can break convexity, in which case we retry with
//! Fejér weights on the same band, whose kernel is nonnegative and therefore
//! keeps the smoothed curvature measure positive.

use std::f64::consts::PI;

use super::{PlanePoint, SupportCurve, ThetaGrid};
use crate::fourier::Differentiator;
use crate::{Error, Result};

/// The raw support samples are taken on an 8x finer grid before filtering.
/// Corner singularities give the polygon support an O(1/n²) spectral tail;
/// filtering at the target resolution would alias that tail across the kept
/// band and can push the smoothed curvature negative.
const OVERSAMPLE: usize = 8;

pub(super) fn support_from_polygon(points: &[PlanePoint], grid: ThetaGrid) -> Result<SupportCurve> {
    if points.len() < 3 {
        return Err(Error::NotConvexInput);
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::NotConvexInput);
    }
    let hull = convex_hull(points);
    if hull.len() != points.len() {
        return Err(Error::NotConvexInput);
    }

    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.y).sum::<f64>() / n;

    let m = grid.len();
    let fine_m = OVERSAMPLE * m;
    let raw: Vec<f64> = (0..fine_m)
        .map(|i| {
            let (sin, cos) = (2.0 * PI * i as f64 / fine_m as f64).sin_cos();
            points
                .iter()
                .map(|p| -(p.x - cx) * cos - (p.y - cy) * sin)
                .fold(f64::MIN, f64::max)
        })
        .collect();

    let cutoff = m / 3;
    let diff = Differentiator::new(fine_m);
    // Anything band-limited to M/3 is sampled alias-free on the target grid.
    let decimate = |fine: Vec<f64>| -> Vec<f64> {
        (0..m).map(|i| fine[i * OVERSAMPLE]).collect()
    };

    let truncated = decimate(diff.filter(&raw, |n| if n <= cutoff { 1.0 } else { 0.0 }));
    if let Ok(curve) = SupportCurve::new(grid, truncated) {
        return Ok(curve);
    }

    let fejer = decimate(diff.filter(&raw, |n| {
        if n <= cutoff {
            1.0 - n as f64 / (cutoff + 1) as f64
        } else {
            0.0
        }
    }));
    match SupportCurve::new(grid, fejer) {
        Ok(curve) => Ok(curve),
        Err(Error::ConvexityViolation { radius, .. }) => Err(Error::SmoothingFailed(radius)),
        Err(e) => Err(e),
    }
}

/// Andrew's monotone chain with strict turns: collinear and duplicate points
/// are dropped, which the caller detects as a size mismatch.
fn convex_hull(points: &[PlanePoint]) -> Vec<PlanePoint> {
    let mut pts: Vec<PlanePoint> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coordinates"));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }

    let cross = |o: PlanePoint, a: PlanePoint, b: PlanePoint| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };

    let mut lower: Vec<PlanePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<PlanePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
