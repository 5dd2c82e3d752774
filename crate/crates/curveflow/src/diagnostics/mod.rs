//! Scalar time series, inequality monitoring, decay-rate fits, and
//! solver-vs-oracle comparison reports.

mod csv;

pub use csv::{
    read_diagnostics_csv, write_comparison_csv, write_diagnostics_csv, DIAGNOSTICS_HEADER,
};

use std::f64::consts::PI;

use crate::geometry::closure_residuals_of;
use crate::solver::{FlowState, Trajectory};
use crate::spectral::SpectralTrajectory;
use crate::{Error, Result};

/// One row of the emitted time series. `deficit` is the raw, unclamped
/// value; monotonicity checks need the sign of its roundoff noise.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsRecord {
    pub tau: f64,
    pub length: f64,
    pub area: f64,
    pub alpha: f64,
    pub deficit: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub inradius: f64,
    pub pan_yang: f64,
    pub bonnesen: f64,
    pub closure_cos: f64,
    pub closure_sin: f64,
    /// `max_θ |k·r_in - 1|`: the circle-convergence metric based on the
    /// inscribed radius.
    pub conv_kr: f64,
    /// `max_θ |k - 2π/L|`: curvature spread around its arc-length mean.
    pub conv_k2pi_l: f64,
}

/// Aggregates every monitored scalar of one recorded state. All fields come
/// from the state's cached quantities and raw radii; no extra LP solve.
pub fn record(state: &FlowState) -> DiagnosticsRecord {
    let q = &state.quantities;
    let (closure_cos, closure_sin) = closure_residuals_of(state.curve.grid(), &state.radii);
    let two_pi_over_l = 2.0 * PI / q.length;
    let mut conv_kr = 0.0f64;
    let mut conv_k2pi_l = 0.0f64;
    for &r in &state.radii {
        let k = 1.0 / r;
        conv_kr = conv_kr.max((k * q.inradius - 1.0).abs());
        conv_k2pi_l = conv_k2pi_l.max((k - two_pi_over_l).abs());
    }
    let gap = q.length - 2.0 * PI * q.inradius;
    DiagnosticsRecord {
        tau: state.tau,
        length: q.length,
        area: q.area,
        alpha: q.alpha,
        deficit: q.deficit_raw,
        k_min: q.k_min,
        k_max: q.k_max,
        inradius: q.inradius,
        pan_yang: q.alpha * q.length - (q.length * q.length - 2.0 * PI * q.area) / PI,
        bonnesen: (q.length * q.length / q.area - 4.0 * PI) - gap * gap / q.area,
        closure_cos,
        closure_sin,
        conv_kr,
        conv_k2pi_l,
    }
}

/// Log-linear least-squares fit of a deficit series over a window.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// Slope of `ln(deficit)` against `τ` (so a pure `e^{-6τ}` series fits
    /// to `-6`).
    pub rate: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Least-squares slope of `ln(deficit)` over `window = (τ_lo, τ_hi)`.
/// Requires a window of length at least 1, at least 10 samples inside it,
/// and every sample above `floor` (values at the roundoff floor carry no
/// decay signal).
pub fn fit_decay_rate(
    series: &[(f64, f64)],
    window: (f64, f64),
    floor: f64,
) -> Result<DecayFit> {
    let (lo, hi) = window;
    if hi - lo < 1.0 - 1e-12 {
        return Err(Error::InsufficientSignal(format!(
            "window [{lo}, {hi}] is shorter than 1 time unit"
        )));
    }
    let inside: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= lo - 1e-12 && *t <= hi + 1e-12)
        .collect();
    if inside.len() < 10 {
        return Err(Error::InsufficientSignal(format!(
            "only {} samples in the window, need 10",
            inside.len()
        )));
    }
    if let Some((t, d)) = inside.iter().find(|(_, d)| !(*d > floor)) {
        return Err(Error::InsufficientSignal(format!(
            "deficit {d} at tau = {t} is at or below the floor {floor}"
        )));
    }

    let n = inside.len() as f64;
    let sx: f64 = inside.iter().map(|(t, _)| t).sum();
    let sy: f64 = inside.iter().map(|(_, d)| d.ln()).sum();
    let sxx: f64 = inside.iter().map(|(t, _)| t * t).sum();
    let sxy: f64 = inside.iter().map(|(t, d)| t * d.ln()).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::InsufficientSignal("degenerate time axis".into()));
    }
    let rate = (n * sxy - sx * sy) / denom;
    let intercept = (sy - rate * sx) / n;
    let residual_rms = (inside
        .iter()
        .map(|(t, d)| {
            let r = d.ln() - (intercept + rate * t);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit { rate, intercept, residual_rms, window, samples: inside.len() })
}

/// Fits over the trailing run of samples that sit above `floor`.
pub fn fit_decay_rate_trailing(series: &[(f64, f64)], floor: f64) -> Result<DecayFit> {
    let last_valid = series
        .iter()
        .rposition(|(_, d)| *d > floor)
        .ok_or_else(|| Error::InsufficientSignal("all samples at the floor".into()))?;
    let first_valid = (0..=last_valid)
        .rev()
        .take_while(|&i| series[i].1 > floor)
        .last()
        .expect("at least one valid sample");
    fit_decay_rate(
        &series[first_valid..=last_valid],
        (series[first_valid].0, series[last_valid].0),
        floor,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

/// Pointwise monotonicity verdict with the first offending index.
#[derive(Debug, Clone, Copy)]
pub struct MonotoneVerdict {
    pub pass: bool,
    pub first_violation: Option<usize>,
}

/// Checks `s_{j+1} ≤ s_j + tol` (or the mirrored bound) pointwise.
pub fn assert_monotone(values: &[f64], direction: Direction, tol: f64) -> MonotoneVerdict {
    for j in 0..values.len().saturating_sub(1) {
        let ok = match direction {
            Direction::NonIncreasing => values[j + 1] <= values[j] + tol,
            Direction::NonDecreasing => values[j + 1] >= values[j] - tol,
        };
        if !ok {
            return MonotoneVerdict { pass: false, first_violation: Some(j + 1) };
        }
    }
    MonotoneVerdict { pass: true, first_violation: None }
}

/// Per-time error of a finite-difference trajectory against the exact
/// spectral evolution.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonRow {
    pub tau: f64,
    pub sup_err: f64,
    pub length_err: f64,
    pub area_err: f64,
}

#[derive(Debug, Clone)]
pub struct TrajectoryComparison {
    pub rows: Vec<ComparisonRow>,
}

impl TrajectoryComparison {
    pub fn max_sup_err(&self) -> f64 {
        self.rows.iter().map(|r| r.sup_err).fold(0.0, f64::max)
    }
}

/// Compares recorded support values and scalars against the oracle at the
/// same sample times.
pub fn compare_trajectories(
    fd: &Trajectory,
    oracle: &SpectralTrajectory,
) -> Result<TrajectoryComparison> {
    if fd.states.len() != oracle.len() {
        return Err(Error::MismatchedSampling(format!(
            "{} recorded states vs {} oracle samples",
            fd.states.len(),
            oracle.len()
        )));
    }
    let rows = fd
        .states
        .iter()
        .zip(oracle.samples())
        .map(|(state, sample)| {
            if (state.tau - sample.tau).abs() > 1e-12 {
                return Err(Error::MismatchedSampling(format!(
                    "tau {} vs oracle {}",
                    state.tau, sample.tau
                )));
            }
            let synthesized = sample.state.synthesize(state.curve.grid())?;
            let sup_err = state
                .curve
                .values()
                .iter()
                .zip(synthesized.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            Ok(ComparisonRow {
                tau: state.tau,
                sup_err,
                length_err: (state.quantities.length - sample.length).abs(),
                area_err: (state.quantities.area - sample.state.area()).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryComparison { rows })
}
