//! Running a scenario: stepping, per-frame diagnostics, checks and artifacts.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::birkhoff_rott::{energy_budget, evaluate, InterfaceState, Integrator, VelocityField};
use crate::error::{Result, SheetError};
use crate::geometry::{chord_arc, detect_self_intersection, write_curve};
use crate::riccati::vorticity_derivative;
use crate::splash::{
    cone_check, contact_frame, extract_matrices, metric_sample, separation_lower_bound_check,
    track_pair, MarkerRegion, PairTrace,
};
use crate::vec2::Vec2;

/// Neighbourhood half-width, in nodes, of the cone check around a tracked label.
const CONE_HALF_WIDTH: usize = 2;
/// Label half-window searched by the vertical projection in matrix extraction.
const PROJECTION_HALF_WINDOW: f64 = 0.12;
/// Constant `C` in the separation lower bound.
const SEPARATION_C: f64 = 8.0;
const JUMP_TOLERANCE: f64 = 1e-12;
const AREA_TOLERANCE: f64 = 1e-3;
const DISPERSION_TOLERANCE: f64 = 0.01;
const EQUILIBRIUM_TOLERANCE: f64 = 1e-10;
const METRIC_GROWTH: f64 = 10.0;
const MATRIX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TEnd,
    NearSingularKernel,
    UnstableStep,
    Error(String),
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::TEnd => write!(f, "t_end"),
            Termination::NearSingularKernel => write!(f, "near_singular_kernel"),
            Termination::UnstableStep => write!(f, "unstable_step"),
            Termination::Error(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<&SheetError> for Termination {
    fn from(e: &SheetError) -> Self {
        match e {
            SheetError::NearSingularKernel { .. } => Termination::NearSingularKernel,
            SheetError::UnstableStep { .. } => Termination::UnstableStep,
            other => Termination::Error(other.to_string()),
        }
    }
}

/// Outcome of one diagnostic. Checks with `gate = false` are reported only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passes: bool,
    pub gate: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            passes: value < tolerance,
            gate: true,
        }
    }

    fn positive(name: impl Into<String>, value: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance: 0.0,
            passes: value > 0.0,
            gate: true,
        }
    }
}

/// Columnar time series on the output clock.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.columns.join(" "));
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|h| h.strip_prefix("# "))
            .ok_or_else(|| SheetError::Parse("series header missing".into()))?;
        let columns: Vec<String> = header.split_whitespace().map(String::from).collect();
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let row = line
                .split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|e| SheetError::Parse(format!("{v}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != columns.len() {
                return Err(SheetError::Parse(format!("row has {} values, expected {}", row.len(), columns.len())));
            }
            rows.push(row);
        }
        Ok(Series { columns, rows })
    }
}

/// The immutable description of a finished run, written as `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: Scenario,
    pub version: String,
    pub termination: Termination,
    pub steps: usize,
    pub final_time: f64,
    pub checks: Vec<Check>,
}

impl Manifest {
    /// All gating checks pass and the run ended at `t_end` or at a kernel stop.
    pub fn passes(&self) -> bool {
        matches!(self.termination, Termination::TEnd | Termination::NearSingularKernel)
            && self.checks.iter().all(|c| c.passes || !c.gate)
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub manifest: Manifest,
    pub series: Series,
    pub traces: Vec<PairTrace>,
    /// Extra text artifacts, by file name.
    pub artifacts: Vec<(String, String)>,
}

impl RunRecord {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.manifest.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        summary_text(&self.manifest)
    }

    /// Writes `run.json`, `series.txt`, `summary.txt`, snapshots and traces.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| SheetError::Io(e.to_string()))?;
        std::fs::write(dir.join("run.json"), json + "\n")?;
        std::fs::write(dir.join("series.txt"), self.series.to_text())?;
        std::fs::write(dir.join("summary.txt"), self.summary())?;
        for (i, t) in self.traces.iter().enumerate() {
            std::fs::write(dir.join(format!("pair_{i}.txt")), t.to_text())?;
        }
        for (name, text) in &self.artifacts {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

/// Key–value summary of a manifest.
pub fn summary_text(m: &Manifest) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name = {}", m.scenario.name);
    let _ = writeln!(s, "termination = {}", m.termination);
    let _ = writeln!(s, "steps = {}", m.steps);
    let _ = writeln!(s, "final_time = {}", m.final_time);
    for c in &m.checks {
        let verdict = match (c.gate, c.passes) {
            (false, _) => "info",
            (true, true) => "pass",
            (true, false) => "fail",
        };
        let _ = writeln!(s, "check.{} = {} value={:e} tolerance={:e}", c.name, verdict, c.value, c.tolerance);
    }
    let _ = writeln!(s, "passes = {}", m.passes());
    s
}

fn mode_amplitude(state: &InterfaceState, k: usize) -> f64 {
    let n = state.n_points();
    let h = state.curve.grid().spacing();
    2.0 / n as f64
        * state
            .curve
            .positions()
            .iter()
            .enumerate()
            .map(|(j, p)| p.y * (k as f64 * j as f64 * h).cos())
            .sum::<f64>()
}

/// Angular frequency from the zero crossings of a standing-wave amplitude
/// that starts at rest.
pub fn frequency_from_crossings(times: &[f64], amp: &[f64]) -> Option<f64> {
    let mut z = Vec::new();
    for i in 1..amp.len() {
        if (amp[i] > 0.0) != (amp[i - 1] > 0.0) {
            let w = amp[i - 1] / (amp[i - 1] - amp[i]);
            z.push(times[i - 1] + w * (times[i] - times[i - 1]));
        }
    }
    match z.len() {
        0 => None,
        1 => Some(std::f64::consts::PI / (2.0 * (z[0] - times[0]))),
        m => Some(std::f64::consts::PI * (m - 1) as f64 / (z[m - 1] - z[0])),
    }
}

/// Per-frame quantities accumulated during the run.
struct Frames {
    series: Series,
    history: Vec<(InterfaceState, VelocityField)>,
    cone: Vec<f64>,
    metric: Vec<f64>,
    y0: Vec<f64>,
    max_dev: f64,
    snapshots: Vec<(String, String)>,
}

impl Frames {
    fn columns(sc: &Scenario) -> Vec<String> {
        let d = &sc.diagnostics;
        let mut c = vec!["t".to_string(), "length".into(), "min_speed".into()];
        if d.energy {
            c.extend(["energy".into(), "kinetic_minus".into(), "kinetic_plus".into()]);
        }
        if d.contact {
            c.push("chord_arc".into());
        }
        if d.vorticity_derivative {
            c.push("max_x".into());
        }
        if d.metric {
            c.push("metric_ratio".into());
        }
        c.extend((0..sc.pairs.len()).map(|i| format!("gap_{i}")));
        c.extend((0..sc.markers.len()).map(|i| format!("area_{i}")));
        c
    }
}

fn record_frame(
    sc: &Scenario,
    state: &InterfaceState,
    step: usize,
    regions: &[MarkerRegion],
    frames: &mut Frames,
) -> Result<()> {
    let d = &sc.diagnostics;
    let ev = evaluate(state, &sc.config)?;
    let speeds = state.curve.speeds();
    let h = state.curve.grid().spacing();
    let length: f64 = speeds.iter().sum::<f64>() * h;
    let mut row = vec![
        state.time,
        length,
        speeds.iter().cloned().fold(f64::INFINITY, f64::min),
    ];
    if d.energy {
        let e = energy_budget(state, &ev.velocity, &ev.geometry, sc.config.surface_tension);
        row.extend([e.total, e.kinetic_minus, e.kinetic_plus]);
    }
    if d.contact {
        row.push(chord_arc(&state.curve));
    }
    if d.vorticity_derivative {
        let x = vorticity_derivative(state, &ev.geometry);
        row.push(x.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    }
    if d.metric {
        let m = metric_sample(state)?;
        frames.metric.push(m.ratio);
        row.push(m.ratio);
    }
    let p = state.curve.positions();
    for pair in &sc.pairs {
        row.push((p[pair[0]] - p[pair[1]]).norm());
    }
    for r in regions {
        row.push(r.area());
    }
    if d.equilibrium {
        for (y, y0) in p.iter().zip(&frames.y0) {
            frames.max_dev = frames.max_dev.max((y.y - y0).abs());
        }
    }
    if d.separation {
        frames.cone.push(pair_cone_value(sc, state)?);
    }
    let frame_index = frames.series.rows.len();
    if frame_index == 0 || (sc.snapshot_every > 0 && frame_index % sc.snapshot_every == 0) {
        frames.snapshots.push((
            format!("state_{step:06}.txt"),
            write_curve(&state.curve, &[&state.strength]),
        ));
    }
    frames.series.rows.push(row);
    if !sc.pairs.is_empty() {
        frames.history.push((state.clone(), ev.velocity));
    }
    Ok(())
}

/// Largest cone value over small neighbourhoods of all tracked labels, in the
/// frame of the closest contact pair (or the first tracked label's tangent).
fn pair_cone_value(sc: &Scenario, state: &InterfaceState) -> Result<f64> {
    let n = state.n_points();
    let p = state.curve.positions();
    let mut eps = 0.0_f64;
    for pair in &sc.pairs {
        let gap = (p[pair[0]] - p[pair[1]]).norm();
        let report = detect_self_intersection(&state.curve, 4.0 * gap);
        let angle = contact_frame(&state.curve, &report).unwrap_or_else(|| {
            let d = state.curve.derivative()[pair[0]];
            d.y.atan2(d.x)
        });
        let w = CONE_HALF_WIDTH as i64;
        let labels: Vec<usize> = pair
            .iter()
            .flat_map(|&c| (-w..=w).map(move |o| (c as i64 + o).rem_euclid(n as i64) as usize))
            .collect();
        eps = eps.max(cone_check(&state.curve, &labels, angle)?.max_value);
    }
    Ok(eps)
}

/// Steps `scenario` to `t_end` or to the first error, evaluating diagnostics
/// on the output cadence. Module errors end the run and become its
/// termination status; only invalid scenarios are returned as `Err`.
pub fn run(sc: &Scenario) -> Result<RunRecord> {
    let state0 = sc.initial_state()?;
    let cfg = &sc.config;
    let d = &sc.diagnostics;
    let integ = Integrator::new(cfg.clone(), &state0)?;
    let mut regions: Vec<MarkerRegion> = sc.markers.iter().map(|m| m.region()).collect();
    let area0: Vec<f64> = regions.iter().map(|r| r.area()).collect();
    let mut frames = Frames {
        series: Series {
            columns: Frames::columns(sc),
            rows: Vec::new(),
        },
        history: Vec::new(),
        cone: Vec::new(),
        metric: Vec::new(),
        y0: state0.curve.positions().iter().map(|p| p.y).collect(),
        max_dev: 0.0,
        snapshots: Vec::new(),
    };
    let mut jump = (0.0_f64, 0.0_f64);
    let (mut amp_t, mut amp) = (Vec::new(), Vec::new());

    let mut state = state0;
    let mut termination = Termination::TEnd;
    let mut steps = 0;
    let mut last_recorded = None;
    let n_steps = cfg.n_steps();
    for k in 0..=n_steps {
        let outcome = (|| -> Result<()> {
            if let Some(m) = d.dispersion_mode {
                amp_t.push(state.time);
                amp.push(mode_amplitude(&state, m));
            }
            if d.jump {
                let ev = evaluate(&state, cfg)?;
                for j in 0..state.n_points() {
                    let du = ev.velocity.u_plus[j] - ev.velocity.u_minus[j];
                    jump.0 = jump.0.max((du.dot(ev.geometry.tangent[j]) - state.strength[j]).abs());
                    jump.1 = jump.1.max(du.dot(ev.geometry.normal[j]).abs());
                }
            }
            if k % cfg.output_every == 0 || k == n_steps {
                record_frame(sc, &state, k, &regions, &mut frames)?;
                last_recorded = Some(k);
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            termination = Termination::from(&e);
            break;
        }
        if k == n_steps {
            break;
        }
        let next = if regions.is_empty() {
            integ.step(&state).map(|s| (s, Vec::new()))
        } else {
            let pts: Vec<Vec2> = regions.iter().flat_map(|r| r.vertices.iter().copied()).collect();
            integ.step_with_tracers(&state, &pts)
        };
        let next = next.and_then(|(s, pts)| {
            let mut it = pts.into_iter();
            for r in regions.iter_mut() {
                r.vertices = it.by_ref().take(r.vertices.len()).collect();
                r.check_inside(&s)?;
            }
            Ok(s)
        });
        match next {
            Ok(s) => {
                state = s;
                steps += 1;
            }
            Err(e) => {
                termination = Termination::from(&e);
                if last_recorded != Some(k) {
                    // The last good state closes the series when it can still be evaluated.
                    let _ = record_frame(sc, &state, k, &regions, &mut frames);
                }
                break;
            }
        }
    }
    let last = format!("state_{steps:06}.txt");
    if !frames.snapshots.iter().any(|(name, _)| *name == last) {
        frames.snapshots.push((last, write_curve(&state.curve, &[&state.strength])));
    }

    let mut checks = Vec::new();
    let series = &frames.series;
    if d.energy {
        let e = series.column("energy").unwrap_or_default();
        let drift = e.iter().map(|v| ((v - e[0]) / e[0]).abs()).fold(0.0, f64::max);
        checks.push(Check::below("energy_drift", drift, d.energy_tolerance.unwrap_or(1e-3)));
    }
    if d.jump {
        checks.push(Check::below("jump_tangential", jump.0, JUMP_TOLERANCE));
        checks.push(Check::below("jump_normal", jump.1, JUMP_TOLERANCE));
    }
    let mut artifacts = Vec::new();
    if let Some(m) = d.dispersion_mode {
        let sigma = cfg.surface_tension;
        let expected = (sigma * (m as f64).powi(3) / 2.0).sqrt();
        let omega = frequency_from_crossings(&amp_t, &amp).unwrap_or(f64::NAN);
        let mut c = Check::below("dispersion", ((omega - expected) / expected).abs(), DISPERSION_TOLERANCE);
        c.passes &= omega.is_finite();
        checks.push(c);
        let mut text = format!("# t mode_{m}\n");
        for (t, a) in amp_t.iter().zip(&amp) {
            let _ = writeln!(text, "{t} {a}");
        }
        artifacts.push(("dispersion.txt".to_string(), text));
    }
    if d.equilibrium {
        checks.push(Check::below("equilibrium", frames.max_dev, EQUILIBRIUM_TOLERANCE));
    }
    if d.contact {
        let c = series.column("chord_arc").unwrap_or_default();
        checks.push(Check::positive("chord_arc_positive", c.iter().cloned().fold(f64::INFINITY, f64::min)));
    }
    if d.metric && !frames.metric.is_empty() {
        let r0 = frames.metric[0];
        let worst = frames.metric.iter().cloned().fold(0.0, f64::max);
        checks.push(Check::below("metric_ratio_growth", worst / r0, METRIC_GROWTH));
    }
    for (i, a0) in area0.iter().enumerate() {
        let a = series.column(&format!("area_{i}")).unwrap_or_default();
        let drift = a.iter().map(|v| ((v - a0) / a0).abs()).fold(0.0, f64::max);
        checks.push(Check::below(format!("area_drift_{i}"), drift, AREA_TOLERANCE));
    }

    let mut traces = Vec::new();
    for (i, pair) in sc.pairs.iter().enumerate() {
        let trace = track_pair(&frames.history, pair[0], pair[1])?;
        let gaps = series.column(&format!("gap_{i}")).unwrap_or_default();
        checks.push(Check::positive(format!("gap_positive_{i}"), gaps.iter().cloned().fold(f64::INFINITY, f64::min)));
        if d.separation && termination == Termination::NearSingularKernel && trace.times.len() > 1 {
            let eps = frames.cone.iter().cloned().fold(0.0, f64::max);
            let t_stop = state.time + cfg.dt;
            let g = trace.gaps();
            let at_stop = separation_lower_bound_check(&trace.times, &g, t_stop, eps, SEPARATION_C)?;
            checks.push(Check {
                name: format!("separation_bound_{i}"),
                value: at_stop.margin,
                tolerance: 0.0,
                passes: at_stop.passes,
                gate: true,
            });
            checks.push(Check {
                name: format!("cone_epsilon_{i}"),
                value: eps,
                tolerance: 1.0,
                passes: eps < 1.0,
                gate: false,
            });
            if let Some(t_lin) = trace.extrapolated_contact_time().filter(|t| *t > t_stop) {
                let lin = separation_lower_bound_check(&trace.times, &g, t_lin, eps, SEPARATION_C)?;
                checks.push(Check {
                    name: format!("separation_bound_extrapolated_{i}"),
                    value: lin.margin,
                    tolerance: 0.0,
                    passes: lin.passes,
                    gate: false,
                });
            }
        }
        if d.matrix {
            let (text, worst, skipped) = matrix_artifact(&frames.history, pair, &trace)?;
            artifacts.push((format!("matrix_{i}.txt"), text));
            checks.push(Check::below(format!("matrix_residual_{i}"), worst, MATRIX_TOLERANCE));
            checks.push(Check {
                name: format!("matrix_frames_skipped_{i}"),
                value: skipped as f64,
                tolerance: 0.0,
                passes: skipped == 0,
                gate: false,
            });
        }
        traces.push(trace);
    }
    artifacts.extend(frames.snapshots);

    let manifest = Manifest {
        scenario: sc.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        termination,
        steps,
        final_time: state.time,
        checks,
    };
    Ok(RunRecord {
        manifest,
        series: frames.series,
        traces,
        artifacts,
    })
}

/// Matrix samples per frame; frames where the projection is not unique are
/// skipped and counted. Returns the text, the worst relative residual and the count.
fn matrix_artifact(
    history: &[(InterfaceState, VelocityField)],
    pair: &[usize; 2],
    trace: &PairTrace,
) -> Result<(String, f64, usize)> {
    let mut text = String::from("# t m11 m12 m21 m22 residual\n");
    let (mut worst, mut skipped) = (0.0_f64, 0);
    for (i, frame) in history.iter().enumerate() {
        match extract_matrices(std::slice::from_ref(frame), pair[0], pair[1], PROJECTION_HALF_WINDOW) {
            Ok(ms) => {
                let m = ms.matrices[0].0;
                let dec = &ms.decompositions[0];
                let rel = dec.residual() / trace.delta_u[i].norm().max(f64::MIN_POSITIVE);
                worst = worst.max(rel);
                let _ = writeln!(text, "{} {} {} {} {} {}", frame.0.time, m[0][0], m[0][1], m[1][0], m[1][1], rel);
            }
            Err(SheetError::NonMonotone { .. } | SheetError::NoIntersection(_) | SheetError::SegmentExitsPhase(_) | SheetError::DegeneratePair(_)) => {
                skipped += 1
            }
            Err(e) => return Err(e),
        }
    }
    Ok((text, worst, skipped))
}

/// Runs `scenario` and writes its artifacts into `dir`.
pub fn run_to_dir(sc: &Scenario, dir: &Path) -> Result<RunRecord> {
    let rec = run(sc)?;
    rec.write(dir)?;
    Ok(rec)
}
