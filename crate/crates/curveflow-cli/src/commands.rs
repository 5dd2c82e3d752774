//! Command implementations and their exit-code contract:
//! 0 completed, 1 configuration or ingestion error, 2 convexity loss or
//! numerical blowup (partial outputs kept), 3 line/point-regime stop,
//! 4 comparison threshold exceeded.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use curveflow::diagnostics::{
    compare_trajectories, fit_decay_rate_trailing, write_comparison_csv, write_diagnostics_csv,
};
use curveflow::geometry::{write_snapshot, SupportCurve};
use curveflow::solver::{run_flow, AlphaMode, RunStatus, SolverConfig, Trajectory};
use curveflow::spectral::{
    write_spectral_file, FourierSupport, SpectralTrajectory,
};
use curveflow::{fmt_g17, Error, Result};

use crate::config::{self, parse_alpha_name, FileConfig};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_REGIME: i32 = 3;
pub const EXIT_THRESHOLD: i32 = 4;

fn config_error(e: Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

fn status_exit(status: RunStatus) -> i32 {
    match status {
        RunStatus::Completed => EXIT_OK,
        RunStatus::ConvexityLost { tau } => {
            eprintln!("run failed: convexity lost at tau = {tau}; partial outputs kept");
            EXIT_FAILED
        }
        RunStatus::Blowup { tau } => {
            eprintln!("run failed: numerical blowup at tau = {tau}; partial outputs kept");
            EXIT_FAILED
        }
        RunStatus::LineRegime { tau } => {
            eprintln!("run stopped at tau = {tau}: length grew past the line-regime bound");
            EXIT_REGIME
        }
        RunStatus::PointRegime { tau } => {
            eprintln!("run stopped at tau = {tau}: length shrank past the point-regime bound");
            EXIT_REGIME
        }
    }
}

fn status_name(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Completed => "completed",
        RunStatus::ConvexityLost { .. } => "convexity-lost",
        RunStatus::Blowup { .. } => "blowup",
        RunStatus::LineRegime { .. } => "line-regime",
        RunStatus::PointRegime { .. } => "point-regime",
    }
}

fn write_run_outputs(traj: &Trajectory, dir: &Path, emit_svg: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_diagnostics_csv(&traj.records, &dir.join("diagnostics.csv"))?;
    for (i, state) in traj.states.iter().enumerate() {
        write_snapshot(&state.curve, &dir.join(format!("snapshot_{i:05}.csv")))?;
    }
    if emit_svg {
        svg::write_curve_overlay(&traj.states, &dir.join("curves.svg"))?;
    }
    Ok(())
}

pub fn cmd_run(config_path: &Path, out_dir: &Path, svg_flag: bool) -> i32 {
    let cfg = match config::load(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let prepared = cfg
        .build_solver()
        .and_then(|solver| Ok((cfg.build_initial(solver.grid_size)?, cfg.build_alpha()?, solver)));
    let (initial, mode, solver) = match prepared {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let traj = match run_flow(&initial, &solver, &mode) {
        Ok(t) => t,
        Err(e) => return config_error(e),
    };
    if let Err(e) = write_run_outputs(&traj, out_dir, svg_flag || cfg.output.svg) {
        return config_error(e);
    }
    status_exit(traj.status)
}

pub fn cmd_analyze(curve_path: &Path) -> i32 {
    let curve = match curveflow::geometry::read_snapshot(curve_path) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    match analyze_row(&curve) {
        Ok(row) => {
            println!("L,A,alpha,deficit,k_min,k_max,r_in,pan_yang,bonnesen");
            println!("{row}");
            EXIT_OK
        }
        Err(e) => config_error(e),
    }
}

fn analyze_row(curve: &SupportCurve) -> Result<String> {
    let q = curve.quantities()?;
    let fields = [
        q.length,
        q.area,
        q.alpha,
        q.deficit_raw,
        q.k_min,
        q.k_max,
        q.inradius,
        curve.pan_yang_residual(),
        curve.bonnesen_residual()?,
    ];
    Ok(fields.iter().map(|&v| fmt_g17(v)).collect::<Vec<_>>().join(","))
}

pub fn cmd_compare(config_path: &Path, out_dir: &Path, threshold: Option<f64>) -> i32 {
    let cfg = match config::load(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let prepared = cfg
        .build_solver()
        .and_then(|solver| Ok((cfg.build_initial(solver.grid_size)?, cfg.build_alpha()?, solver)));
    let (initial, mode, solver) = match prepared {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    if !matches!(mode, AlphaMode::AreaPreserving) {
        return config_error(Error::InvalidConfig(
            "compare needs alpha.mode = \"area-preserving\"; the exact evolution exists only there"
                .into(),
        ));
    }
    let threshold = threshold.unwrap_or_else(|| cfg.threshold());

    let oracle_initial =
        match FourierSupport::from_curve(&initial, solver.grid_size / 2 - 1) {
            Ok(f) => f,
            Err(e) => return config_error(e),
        };
    let traj = match run_flow(&initial, &solver, &mode) {
        Ok(t) => t,
        Err(e) => return config_error(e),
    };
    let report = SpectralTrajectory::sample(&oracle_initial, &traj.taus())
        .and_then(|oracle| compare_trajectories(&traj, &oracle));
    let comparison = match report {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let written = std::fs::create_dir_all(out_dir)
        .map_err(Error::from)
        .and_then(|_| write_comparison_csv(&comparison.rows, &out_dir.join("compare.csv")))
        .and_then(|_| write_spectral_file(&oracle_initial, &out_dir.join("oracle.csv")));
    if let Err(e) = written {
        return config_error(e);
    }

    let status_code = status_exit(traj.status);
    if status_code != EXIT_OK {
        return status_code;
    }
    let sup = comparison.max_sup_err();
    if sup > threshold {
        eprintln!("comparison failed: sup error {sup:.3e} exceeds threshold {threshold:.3e}");
        return EXIT_THRESHOLD;
    }
    EXIT_OK
}

struct SweepPoint {
    m: usize,
    dt: f64,
    alpha_name: String,
    alpha: AlphaMode,
}

struct SweepRow {
    dir_name: String,
    point_desc: String,
    status: &'static str,
    failure: Option<RunStatus>,
    final_deficit: f64,
    decay_rate: f64,
    max_area_drift: f64,
    max_length_drift: f64,
    sup_err: f64,
}

pub fn cmd_sweep(config_path: &Path, out_dir: &Path) -> i32 {
    let cfg = match config::load(config_path) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let Some(sweep) = &cfg.sweep else {
        return config_error(Error::InvalidConfig("sweep needs a [sweep] section".into()));
    };
    let base_solver = match cfg.build_solver() {
        Ok(s) => s,
        Err(e) => return config_error(e),
    };

    let ms = sweep.m.clone().unwrap_or_else(|| vec![base_solver.grid_size]);
    let dts = sweep.dt.clone().unwrap_or_else(|| vec![base_solver.dt]);
    let alphas: Vec<(String, AlphaMode)> = match &sweep.alpha_modes {
        Some(names) => {
            let mut list = Vec::new();
            for name in names {
                match parse_alpha_name(name) {
                    Ok(mode) => list.push((name.clone(), mode)),
                    Err(e) => return config_error(e),
                }
            }
            list
        }
        None => match cfg.build_alpha() {
            Ok(mode) => vec![(cfg.alpha.mode.clone(), mode)],
            Err(e) => return config_error(e),
        },
    };

    let mut points = Vec::new();
    for &m in &ms {
        for &dt in &dts {
            for (name, mode) in &alphas {
                points.push(SweepPoint {
                    m,
                    dt,
                    alpha_name: name.clone(),
                    alpha: mode.clone(),
                });
            }
        }
    }
    if points.is_empty() {
        return config_error(Error::InvalidConfig("sweep grid is empty".into()));
    }
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return config_error(e.into());
    }

    // Convergence reference: the exact evolution of the same initial data
    // ingested on a much finer grid. Only area-preserving points have it.
    let m_ref = (2 * ms.iter().copied().max().unwrap_or(256)).max(256);
    let reference: Option<FourierSupport> = cfg
        .build_initial(m_ref)
        .and_then(|fine| FourierSupport::from_curve(&fine, (m_ref / 2 - 1).min(200)))
        .ok();

    let rows: Mutex<Vec<Option<SweepRow>>> =
        Mutex::new((0..points.len()).map(|_| None).collect());
    let next: Mutex<usize> = Mutex::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(points.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().expect("index lock");
                    if *guard >= points.len() {
                        break;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let row = sweep_one(&cfg, &base_solver, &points[idx], idx, out_dir, reference.as_ref());
                rows.lock().expect("row lock")[idx] = Some(row);
            });
        }
    });

    let rows: Vec<SweepRow> = rows
        .into_inner()
        .expect("row lock")
        .into_iter()
        .map(|r| r.expect("every grid point produced a row"))
        .collect();

    let mut out = String::from(
        "run,m,dt,alpha,status,final_deficit,decay_rate,max_area_drift,max_length_drift,sup_err\n",
    );
    for row in &rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.dir_name,
            row.point_desc,
            row.status,
            fmt_g17(row.final_deficit),
            fmt_g17(row.decay_rate),
            fmt_g17(row.max_area_drift),
            fmt_g17(row.max_length_drift),
            fmt_g17(row.sup_err),
        ));
    }
    if let Err(e) = std::fs::write(out_dir.join("sweep_summary.csv"), out) {
        return config_error(e.into());
    }

    for row in &rows {
        if let Some(status) = row.failure {
            eprintln!("sweep point {} did not complete: {}", row.dir_name, status_name(status));
        }
    }
    if rows.iter().any(|r| {
        matches!(
            r.failure,
            Some(RunStatus::ConvexityLost { .. }) | Some(RunStatus::Blowup { .. })
        ) || r.status == "ingestion-error"
    }) {
        EXIT_FAILED
    } else if rows.iter().any(|r| r.failure.is_some()) {
        EXIT_REGIME
    } else {
        EXIT_OK
    }
}

fn sweep_one(
    cfg: &FileConfig,
    base: &SolverConfig,
    point: &SweepPoint,
    idx: usize,
    out_dir: &Path,
    reference: Option<&FourierSupport>,
) -> SweepRow {
    let dir_name = format!("run_{idx:03}");
    let point_desc = format!("{},{},{}", point.m, fmt_g17(point.dt), point.alpha_name);
    let run_dir: PathBuf = out_dir.join(&dir_name);
    let nan = f64::NAN;
    let error_row = |status: &'static str| SweepRow {
        dir_name: dir_name.clone(),
        point_desc: point_desc.clone(),
        status,
        failure: None,
        final_deficit: nan,
        decay_rate: nan,
        max_area_drift: nan,
        max_length_drift: nan,
        sup_err: nan,
    };

    let solver = SolverConfig {
        grid_size: point.m,
        dt: point.dt,
        kind: base.kind,
        record_every: base.record_every,
        t_end: base.t_end,
    };
    let Ok(initial) = cfg.build_initial(point.m) else {
        return error_row("ingestion-error");
    };
    let traj = match run_flow(&initial, &solver, &point.alpha) {
        Ok(t) => t,
        Err(_) => return error_row("ingestion-error"),
    };
    if write_run_outputs(&traj, &run_dir, false).is_err() {
        return error_row("ingestion-error");
    }

    let records = &traj.records;
    let (a0, l0) = (records[0].area, records[0].length);
    let max_area_drift = records
        .iter()
        .map(|r| (r.area - a0).abs() / a0)
        .fold(0.0f64, f64::max);
    let max_length_drift = records
        .iter()
        .map(|r| (r.length - l0).abs() / l0)
        .fold(0.0f64, f64::max);
    let series: Vec<(f64, f64)> = records.iter().map(|r| (r.tau, r.deficit)).collect();
    let decay_rate = fit_decay_rate_trailing(&series, 1e-13 * l0 * l0)
        .map(|fit| fit.rate)
        .unwrap_or(nan);

    let sup_err = match (reference, &point.alpha) {
        (Some(fs), AlphaMode::AreaPreserving) => SpectralTrajectory::sample(fs, &traj.taus())
            .and_then(|oracle| compare_trajectories(&traj, &oracle))
            .map(|cmp| cmp.max_sup_err())
            .unwrap_or(nan),
        _ => nan,
    };

    SweepRow {
        dir_name,
        point_desc,
        status: status_name(traj.status),
        failure: (!traj.status.is_completed()).then_some(traj.status),
        final_deficit: records.last().map(|r| r.deficit).unwrap_or(nan),
        decay_rate,
        max_area_drift,
        max_length_drift,
        sup_err,
    }
}
