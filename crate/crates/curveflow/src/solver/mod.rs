//! Explicit time stepping for the nonlocal flow, in two equivalent forms.
//!
//! The support solver integrates `∂S/∂τ = ∂²S/∂θ² + S - α` and is the
//! workhorse; the curvature solver integrates
//! `∂k/∂τ = ∂²k/∂θ² - (2/k)(∂k/∂θ)² + (kα - 1)k` and exists to cross-check
//! the support path through an independent equation. Both use classical RK4
//! with spectral spatial derivatives, and both re-evaluate the nonlocal speed
//! `α` at every internal stage; freezing it per step measurably degrades
//! area conservation.
//!
//! Degenerate inputs (circles) run through the same code path: stationarity
//! is a test, not a special case.

use std::f64::consts::PI;

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::fourier::Differentiator;
use crate::geometry::{CurveQuantities, SupportCurve, ThetaGrid, CONVEXITY_REL_TOL};
use crate::spectral::support_from_radius;
use crate::{Error, Result};

/// A general-α run stops once the length exceeds this multiple of its
/// initial value; the curve is heading for the straight-line regime and the
/// checkable content is the `k_max → 0` trend already recorded.
pub const LINE_REGIME_FACTOR: f64 = 1e3;

/// A run stops once the length falls below this fraction of its initial
/// value; the curve is collapsing toward a point.
pub const POINT_REGIME_FACTOR: f64 = 1e-3;

/// Choice of the nonlocal speed `α(t)`.
#[derive(Debug, Clone)]
pub enum AlphaMode {
    /// `α = (1/L)∫(1/k)ds`: keeps the enclosed area constant and the length
    /// non-increasing.
    AreaPreserving,
    /// `α = L/2π`: keeps the length constant and the area non-decreasing.
    LengthPreserving,
    /// Fixed positive speed.
    Constant(f64),
    /// Piecewise-linear table of `(t, α)`, clamped outside its range.
    Tabulated(AlphaTable),
}

impl AlphaMode {
    pub fn validate(&self) -> Result<()> {
        match self {
            AlphaMode::Constant(c) if !(c.is_finite() && *c > 0.0) => Err(Error::InvalidConfig(
                format!("constant alpha must be positive and finite, got {c}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Strictly increasing sample times with finite values; evaluation is linear
/// interpolation clamped to the end values.
#[derive(Debug, Clone)]
pub struct AlphaTable {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl AlphaTable {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::InvalidConfig(
                "alpha table needs matching, non-empty time and value lists".into(),
            ));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("alpha table entries must be finite".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("alpha table times must be strictly increasing".into()));
        }
        Ok(Self { times, values })
    }

    pub fn value_at(&self, tau: f64) -> f64 {
        match self.times.iter().position(|&t| t > tau) {
            Some(0) => self.values[0],
            None => *self.values.last().expect("non-empty table"),
            Some(i) => {
                let (t0, t1) = (self.times[i - 1], self.times[i]);
                let w = (tau - t0) / (t1 - t0);
                self.values[i - 1] * (1.0 - w) + self.values[i] * w
            }
        }
    }
}

/// Which PDE the run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Support,
    Curvature,
}

/// Grid, step and horizon for one run.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid_size: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Steps between recorded states; the initial and final states are always
    /// recorded.
    pub record_every: usize,
    pub kind: SolverKind,
}

impl SolverConfig {
    /// Structural validation. The parabolic stability bound is advisory (see
    /// [`SolverConfig::max_stable_dt`]); deliberately overstepping it is a
    /// supported way to observe blowup, which the run loop reports cleanly.
    pub fn validate(&self) -> Result<()> {
        ThetaGrid::new(self.grid_size)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Conservative explicit-RK4 stability bound for the spectral diffusion
    /// operator: `0.9 · 0.25 · (2π/M)²`.
    pub fn max_stable_dt(&self) -> f64 {
        let h = 2.0 * PI / self.grid_size as f64;
        0.9 * 0.25 * h * h
    }

    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }
}

/// One recorded instant of a run.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub tau: f64,
    /// Support representation; for curvature runs it is recovered from `1/k`
    /// with the translation component set to zero.
    pub curve: SupportCurve,
    /// Raw per-node radius of curvature as the solver sees it (`1/k` for the
    /// curvature solver).
    pub radii: Vec<f64>,
    pub quantities: CurveQuantities,
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    ConvexityLost { tau: f64 },
    Blowup { tau: f64 },
    LineRegime { tau: f64 },
    PointRegime { tau: f64 },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// Recorded states plus their diagnostics rows and the final status. Failed
/// runs keep the partial trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    pub records: Vec<DiagnosticsRecord>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn taus(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.tau).collect()
    }

    pub fn final_state(&self) -> &FlowState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// `α` for a recorded state under the given mode.
pub fn alpha_eval(mode: &AlphaMode, state: &FlowState) -> f64 {
    match mode {
        AlphaMode::AreaPreserving => state.quantities.alpha,
        AlphaMode::LengthPreserving => state.quantities.length / (2.0 * PI),
        AlphaMode::Constant(c) => *c,
        AlphaMode::Tabulated(table) => table.value_at(state.tau),
    }
}

struct StageEval {
    rhs: Vec<f64>,
    min_radius: f64,
    length: f64,
}

/// Support-function stepper: one instance per grid size.
pub struct SupportFlow {
    grid: ThetaGrid,
    diff: Differentiator,
}

impl SupportFlow {
    pub fn new(grid: ThetaGrid) -> Self {
        Self { grid, diff: Differentiator::new(grid.len()) }
    }

    /// `∂S/∂τ = S'' + S - α` at every node; the strict-convexity guard is
    /// applied to the curvature radii computed along the way.
    pub fn rhs(&self, values: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let stage = self.stage(values, StageAlpha::Fixed(alpha), 0.0);
        let length = stage.length;
        if stage.min_radius <= CONVEXITY_REL_TOL * length / (2.0 * PI) {
            return Err(Error::ConvexityViolation { index: 0, radius: stage.min_radius });
        }
        Ok(stage.rhs)
    }

    fn stage(&self, values: &[f64], alpha: StageAlpha<'_>, tau: f64) -> StageEval {
        let h = self.grid.spacing();
        let second = self.diff.derivative(values, 2);
        let mut min_radius = f64::MAX;
        let mut length = 0.0;
        let mut alpha_num = 0.0;
        let mut radii = second;
        for (r, &s) in radii.iter_mut().zip(values) {
            *r += s;
            min_radius = min_radius.min(*r);
            length += s;
            alpha_num += *r * *r;
        }
        length *= h;
        let alpha = match alpha {
            StageAlpha::Fixed(a) => a,
            StageAlpha::Mode(mode) => match mode {
                AlphaMode::AreaPreserving => h * alpha_num / length,
                AlphaMode::LengthPreserving => length / (2.0 * PI),
                AlphaMode::Constant(c) => *c,
                AlphaMode::Tabulated(table) => table.value_at(tau),
            },
        };
        let mut rhs = radii;
        for r in rhs.iter_mut() {
            *r -= alpha;
        }
        StageEval { rhs, min_radius, length }
    }

    /// One RK4 step of a recorded state; `α` is re-evaluated at each stage.
    pub fn step(&self, state: &FlowState, dt: f64, mode: &AlphaMode) -> Result<FlowState> {
        let values = rk4_step(state.curve.values(), state.tau, dt, |y, tau| {
            let stage = self.stage(y, StageAlpha::Mode(mode), tau);
            if stage.min_radius <= CONVEXITY_REL_TOL * stage.length / (2.0 * PI) {
                return Err(Error::ConvexityViolation { index: 0, radius: stage.min_radius });
            }
            Ok(stage.rhs)
        })?;
        let tau = state.tau + dt;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup(tau));
        }
        support_state(self.grid, tau, &values)
    }
}

enum StageAlpha<'a> {
    Fixed(f64),
    Mode(&'a AlphaMode),
}

/// Curvature stepper, evolving `k(θ)` directly.
pub struct CurvatureFlow {
    grid: ThetaGrid,
    diff: Differentiator,
}

impl CurvatureFlow {
    pub fn new(grid: ThetaGrid) -> Self {
        Self { grid, diff: Differentiator::new(grid.len()) }
    }

    /// `∂k/∂τ = k'' - (2/k)(k')² + (kα - 1)k`, pointwise.
    pub fn rhs(&self, values: &[f64], alpha: f64) -> Result<Vec<f64>> {
        self.stage(values, StageAlpha::Fixed(alpha), 0.0)
    }

    fn stage(&self, values: &[f64], alpha: StageAlpha<'_>, tau: f64) -> Result<Vec<f64>> {
        if let Some(i) = values.iter().position(|&k| !(k > 0.0)) {
            return Err(Error::NonpositiveCurvature { index: i, value: values[i] });
        }
        let h = self.grid.spacing();
        let first = self.diff.derivative(values, 1);
        let second = self.diff.derivative(values, 2);
        let alpha = match alpha {
            StageAlpha::Fixed(a) => a,
            StageAlpha::Mode(mode) => match mode {
                AlphaMode::AreaPreserving => {
                    let length: f64 = values.iter().map(|k| 1.0 / k).sum::<f64>() * h;
                    values.iter().map(|k| 1.0 / (k * k)).sum::<f64>() * h / length
                }
                AlphaMode::LengthPreserving => {
                    values.iter().map(|k| 1.0 / k).sum::<f64>() * h / (2.0 * PI)
                }
                AlphaMode::Constant(c) => *c,
                AlphaMode::Tabulated(table) => table.value_at(tau),
            },
        };
        Ok(values
            .iter()
            .enumerate()
            .map(|(i, &k)| second[i] - 2.0 / k * first[i] * first[i] + (k * alpha - 1.0) * k)
            .collect())
    }

    /// One RK4 step of a recorded state (whose radii are `1/k`).
    pub fn step(&self, state: &FlowState, dt: f64, mode: &AlphaMode) -> Result<FlowState> {
        let k: Vec<f64> = state.radii.iter().map(|r| 1.0 / r).collect();
        let next = rk4_step(&k, state.tau, dt, |y, tau| {
            self.stage(y, StageAlpha::Mode(mode), tau)
        })?;
        let tau = state.tau + dt;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup(tau));
        }
        curvature_state(self.grid, tau, &next)
    }
}

fn rk4_step(
    y: &[f64],
    tau: f64,
    dt: f64,
    mut f: impl FnMut(&[f64], f64) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let shifted = |y: &[f64], k: &[f64], c: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(v, s)| v + c * s).collect()
    };
    let k1 = f(y, tau)?;
    let k2 = f(&shifted(y, &k1, 0.5 * dt), tau + 0.5 * dt)?;
    let k3 = f(&shifted(y, &k2, 0.5 * dt), tau + 0.5 * dt)?;
    let k4 = f(&shifted(y, &k3, dt), tau + dt)?;
    Ok(y
        .iter()
        .enumerate()
        .map(|(i, v)| v + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

fn support_state(grid: ThetaGrid, tau: f64, values: &[f64]) -> Result<FlowState> {
    let curve = SupportCurve::new(grid, values.to_vec())?;
    let radii = curve.radius_of_curvature().to_vec();
    let quantities = curve.quantities()?;
    Ok(FlowState { tau, curve, radii, quantities })
}

fn curvature_state(grid: ThetaGrid, tau: f64, k: &[f64]) -> Result<FlowState> {
    if let Some(i) = k.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonpositiveCurvature { index: i, value: k[i] });
    }
    let radii: Vec<f64> = k.iter().map(|v| 1.0 / v).collect();
    let curve = support_from_radius(grid, &radii)?;
    let quantities = curve.quantities()?;
    Ok(FlowState { tau, curve, radii, quantities })
}

/// Integrates the flow from `initial` until the horizon, an error, or a
/// regime stop. Dynamic events end the run with a status and keep the
/// partial trajectory; only precondition failures return `Err`.
pub fn run_flow(
    initial: &SupportCurve,
    config: &SolverConfig,
    mode: &AlphaMode,
) -> Result<Trajectory> {
    config.validate()?;
    mode.validate()?;
    if initial.grid().len() != config.grid_size {
        return Err(Error::InvalidConfig(format!(
            "initial curve has {} nodes, config asks for {}",
            initial.grid().len(),
            config.grid_size
        )));
    }
    let grid = initial.grid();
    match config.kind {
        SolverKind::Support => {
            let flow = SupportFlow::new(grid);
            let state0 = support_state(grid, 0.0, initial.values())?;
            run_loop(config, state0, |y, tau| {
                let stage = flow.stage(y, StageAlpha::Mode(mode), tau);
                Ok(stage)
            }, |tau, y| support_state(grid, tau, y))
        }
        SolverKind::Curvature => {
            let flow = CurvatureFlow::new(grid);
            let k0: Vec<f64> = initial.radius_of_curvature().iter().map(|r| 1.0 / r).collect();
            let state0 = curvature_state(grid, 0.0, &k0)?;
            run_loop(config, state0, |y, tau| {
                let h = grid.spacing();
                let rhs = flow.stage(y, StageAlpha::Mode(mode), tau)?;
                let min_radius = y.iter().map(|k| 1.0 / k).fold(f64::MAX, f64::min);
                let length = y.iter().map(|k| 1.0 / k).sum::<f64>() * h;
                Ok(StageEval { rhs, min_radius, length })
            }, |tau, y| curvature_state(grid, tau, y))
        }
    }
}

fn run_loop(
    config: &SolverConfig,
    state0: FlowState,
    mut stage: impl FnMut(&[f64], f64) -> Result<StageEval>,
    mut make_state: impl FnMut(f64, &[f64]) -> Result<FlowState>,
) -> Result<Trajectory> {
    let dt = config.dt;
    let n_steps = config.steps();
    let length0 = state0.quantities.length;
    let conv_tol = |length: f64| CONVEXITY_REL_TOL * length / (2.0 * PI);

    let mut field: Vec<f64> = match config.kind {
        SolverKind::Support => state0.curve.values().to_vec(),
        SolverKind::Curvature => state0.radii.iter().map(|r| 1.0 / r).collect(),
    };
    let mut records = vec![diagnostics::record(&state0)];
    let mut states = vec![state0];
    let mut status = RunStatus::Completed;

    for step_idx in 0..n_steps {
        let tau = step_idx as f64 * dt;
        let tau_next = (step_idx + 1) as f64 * dt;

        let attempt = rk4_step(&field, tau, dt, |y, t| {
            let eval = stage(y, t)?;
            if eval.min_radius <= conv_tol(eval.length) {
                return Err(Error::ConvexityViolation { index: 0, radius: eval.min_radius });
            }
            Ok(eval.rhs)
        });
        let next = match attempt {
            Ok(v) => v,
            Err(Error::ConvexityViolation { .. } | Error::NonpositiveCurvature { .. }) => {
                status = RunStatus::ConvexityLost { tau };
                break;
            }
            Err(Error::NumericalBlowup(t)) => {
                status = RunStatus::Blowup { tau: t };
                break;
            }
            Err(e) => return Err(e),
        };
        if next.iter().any(|v| !v.is_finite()) {
            status = RunStatus::Blowup { tau: tau_next };
            break;
        }
        field = next;

        // Cheap per-step length probe for the regime guards.
        let length = match config.kind {
            SolverKind::Support => {
                field.iter().sum::<f64>() * 2.0 * PI / config.grid_size as f64
            }
            SolverKind::Curvature => {
                field.iter().map(|k| 1.0 / k).sum::<f64>() * 2.0 * PI / config.grid_size as f64
            }
        };
        let regime = if length > LINE_REGIME_FACTOR * length0 {
            Some(RunStatus::LineRegime { tau: tau_next })
        } else if length < POINT_REGIME_FACTOR * length0 {
            Some(RunStatus::PointRegime { tau: tau_next })
        } else {
            None
        };

        let is_record = (step_idx + 1) % config.record_every == 0
            || step_idx + 1 == n_steps
            || regime.is_some();
        if is_record {
            match make_state(tau_next, &field) {
                Ok(state) => {
                    records.push(diagnostics::record(&state));
                    states.push(state);
                }
                Err(Error::ConvexityViolation { .. } | Error::NonpositiveCurvature { .. }) => {
                    status = RunStatus::ConvexityLost { tau: tau_next };
                    break;
                }
                Err(Error::NumericalBlowup(t)) => {
                    status = RunStatus::Blowup { tau: t };
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(r) = regime {
            status = r;
            break;
        }
    }

    Ok(Trajectory { states, records, status })
}
