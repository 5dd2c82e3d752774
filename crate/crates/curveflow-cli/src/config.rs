//! Run-configuration files: TOML with `[initial]`, `[alpha]`, `[solver]` and
//! optional `[output]` / `[sweep]` sections. See the repository README for
//! the schema and examples.

use std::path::Path;

use curveflow::geometry::{PlanePoint, SupportCurve, ThetaGrid};
use curveflow::solver::{AlphaMode, AlphaTable, SolverConfig, SolverKind};
use curveflow::spectral::FourierSupport;
use curveflow::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub initial: InitialSection,
    pub alpha: AlphaSection,
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// `"circle R"`, `"harmonic n eps"` or `"geometric q c"`.
    pub preset: Option<String>,
    /// Harmonic rows; `n = 0` carries the mean of `S` in `a`.
    pub fourier: Option<Vec<FourierRow>>,
    /// Vertices of a strictly convex polygon.
    pub polygon: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierRow {
    pub n: usize,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSection {
    /// `area-preserving`, `length-preserving`, `constant` or `tabulated`.
    pub mode: String,
    pub constant: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub m: usize,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    #[serde(default = "default_kind")]
    pub kind: String,
}

fn default_kind() -> String {
    "support".into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub svg: bool,
    pub threshold: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub m: Option<Vec<usize>>,
    pub dt: Option<Vec<f64>>,
    pub alpha_modes: Option<Vec<String>>,
}

pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

impl FileConfig {
    pub fn build_initial(&self, m: usize) -> Result<SupportCurve> {
        let grid = ThetaGrid::new(m)?;
        let sources = [
            self.initial.preset.is_some(),
            self.initial.fourier.is_some(),
            self.initial.polygon.is_some(),
        ];
        if sources.iter().filter(|&&p| p).count() != 1 {
            return Err(Error::InvalidConfig(
                "exactly one of initial.preset, initial.fourier, initial.polygon is required"
                    .into(),
            ));
        }
        if let Some(preset) = &self.initial.preset {
            return build_preset(preset, grid);
        }
        if let Some(rows) = &self.initial.fourier {
            let mean = rows
                .iter()
                .find(|r| r.n == 0)
                .map(|r| r.a)
                .ok_or_else(|| Error::InvalidConfig("fourier rows need an n = 0 mean row".into()))?;
            let modes: Vec<(usize, f64, f64)> = rows
                .iter()
                .filter(|r| r.n > 0)
                .map(|r| (r.n, r.a, r.b))
                .collect();
            let max_n = modes.iter().map(|&(n, _, _)| n).max().unwrap_or(1);
            if max_n > m / 2 - 1 {
                return Err(Error::InvalidConfig(format!(
                    "fourier mode {max_n} does not fit on an m = {m} grid"
                )));
            }
            return FourierSupport::from_modes(mean, &modes, max_n)?.synthesize(grid);
        }
        let polygon = self.initial.polygon.as_ref().expect("one source present");
        let points: Vec<PlanePoint> =
            polygon.iter().map(|&[x, y]| PlanePoint::new(x, y)).collect();
        SupportCurve::from_polygon(&points, grid)
    }

    pub fn build_alpha(&self) -> Result<AlphaMode> {
        let mode = match self.alpha.mode.as_str() {
            "area-preserving" => AlphaMode::AreaPreserving,
            "length-preserving" => AlphaMode::LengthPreserving,
            "constant" => {
                let c = self.alpha.constant.ok_or_else(|| {
                    Error::InvalidConfig("alpha.constant is required for constant mode".into())
                })?;
                AlphaMode::Constant(c)
            }
            "tabulated" => {
                let times = self.alpha.times.clone().ok_or_else(|| {
                    Error::InvalidConfig("alpha.times is required for tabulated mode".into())
                })?;
                let values = self.alpha.values.clone().ok_or_else(|| {
                    Error::InvalidConfig("alpha.values is required for tabulated mode".into())
                })?;
                AlphaMode::Tabulated(AlphaTable::new(times, values)?)
            }
            other => {
                return Err(Error::InvalidConfig(format!("unknown alpha mode `{other}`")));
            }
        };
        mode.validate()?;
        Ok(mode)
    }

    pub fn build_solver(&self) -> Result<SolverConfig> {
        let kind = parse_kind(&self.solver.kind)?;
        let cfg = SolverConfig {
            grid_size: self.solver.m,
            dt: self.solver.dt,
            t_end: self.solver.t_end,
            record_every: self.solver.record_every,
            kind,
        };
        cfg.validate()?;
        if cfg.dt > cfg.max_stable_dt() {
            eprintln!(
                "warning: dt = {} exceeds the stability bound {:.3e} for m = {}; \
                 expect the run to be reported as a blowup",
                cfg.dt,
                cfg.max_stable_dt(),
                cfg.grid_size
            );
        }
        Ok(cfg)
    }

    pub fn threshold(&self) -> f64 {
        self.output.threshold.unwrap_or(1e-5)
    }
}

pub fn parse_kind(kind: &str) -> Result<SolverKind> {
    match kind {
        "support" => Ok(SolverKind::Support),
        "curvature" => Ok(SolverKind::Curvature),
        other => Err(Error::InvalidConfig(format!("unknown solver kind `{other}`"))),
    }
}

pub fn parse_alpha_name(name: &str) -> Result<AlphaMode> {
    match name {
        "area-preserving" => Ok(AlphaMode::AreaPreserving),
        "length-preserving" => Ok(AlphaMode::LengthPreserving),
        other => Err(Error::InvalidConfig(format!(
            "sweep alpha mode `{other}` must be area-preserving or length-preserving"
        ))),
    }
}

fn build_preset(preset: &str, grid: ThetaGrid) -> Result<SupportCurve> {
    let tokens: Vec<&str> = preset.split_whitespace().collect();
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::InvalidConfig(format!("bad number `{s}` in preset `{preset}`")))
    };
    match tokens.as_slice() {
        ["circle", r] => {
            let r = parse(r)?;
            if r <= 0.0 {
                return Err(Error::InvalidConfig("circle radius must be positive".into()));
            }
            SupportCurve::circle(grid, r)
        }
        ["harmonic", n, eps] => {
            let n = n.parse::<usize>().map_err(|_| {
                Error::InvalidConfig(format!("bad harmonic index in preset `{preset}`"))
            })?;
            if n == 0 || n >= grid.len() / 2 {
                return Err(Error::InvalidConfig(format!(
                    "harmonic index {n} does not fit on an m = {} grid",
                    grid.len()
                )));
            }
            SupportCurve::harmonic(grid, n, parse(eps)?)
        }
        ["geometric", q, c] => SupportCurve::geometric(grid, parse(q)?, parse(c)?),
        _ => Err(Error::InvalidConfig(format!(
            "unknown preset `{preset}`; expected `circle R`, `harmonic n eps` or `geometric q c`"
        ))),
    }
}
