//! Summaries and plot data for finished runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::run::{summary_text, Manifest, Series};
use crate::error::{Result, SheetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join("run.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|_| SheetError::MissingManifest(path.display().to_string()))?;
    serde_json::from_str(&text).map_err(|e| SheetError::Parse(format!("{}: {e}", path.display())))
}

/// Writes `plot_<column>.txt` (time against value) for every series column.
fn write_plot_data(dir: &Path) -> Result<usize> {
    let path = dir.join("series.txt");
    if !path.exists() {
        return Ok(0);
    }
    let series = Series::from_text(&std::fs::read_to_string(path)?)?;
    let t = series.column("t").unwrap_or_default();
    let mut count = 0;
    for name in series.columns.iter().filter(|c| *c != "t") {
        let v = series.column(name).unwrap_or_default();
        let mut s = format!("# t {name}\n");
        for (a, b) in t.iter().zip(&v) {
            let _ = writeln!(s, "{a} {b}");
        }
        std::fs::write(dir.join(format!("plot_{name}.txt")), s)?;
        count += 1;
    }
    Ok(count)
}

/// Same scenario with `dt_a = 2 dt_b`.
fn halved_pair(a: &Manifest, b: &Manifest) -> bool {
    let mut sa = a.scenario.clone();
    let mut sb = b.scenario.clone();
    let ratio = sa.config.dt / sb.config.dt;
    sa.config.dt = 0.0;
    sb.config.dt = 0.0;
    sa.config.output_every = 0;
    sb.config.output_every = 0;
    sa.name.clear();
    sb.name.clear();
    sa == sb && (ratio - 2.0).abs() < 1e-9
}

/// Reads finished run directories, writes plot data next to each series and
/// returns the summary text and whether every run passes. Pairs of runs that
/// differ only by a halved time step get an observed convergence order for
/// each drift-type check.
pub fn report(dirs: &[PathBuf], format: ReportFormat) -> Result<(String, bool)> {
    let mut runs = Vec::new();
    for d in dirs {
        runs.push((d.clone(), load_manifest(d)?));
        write_plot_data(d)?;
    }
    let mut out = String::new();
    if format == ReportFormat::Csv {
        out.push_str("run,check,verdict,value,tolerance\n");
    }
    let mut all = true;
    for (dir, m) in &runs {
        all &= m.passes();
        match format {
            ReportFormat::Text => {
                let _ = writeln!(out, "== {} ({})", dir.display(), m.checks.len());
                out.push_str(&summary_text(m));
            }
            ReportFormat::Csv => {
                let _ = writeln!(out, "{},termination,{},0,0", dir.display(), m.termination);
                for c in &m.checks {
                    let verdict = match (c.gate, c.passes) {
                        (false, _) => "info",
                        (true, true) => "pass",
                        (true, false) => "fail",
                    };
                    let _ = writeln!(out, "{},{},{},{},{}", dir.display(), c.name, verdict, c.value, c.tolerance);
                }
            }
        }
    }
    for (da, a) in &runs {
        for (db, b) in &runs {
            if !halved_pair(a, b) {
                continue;
            }
            for ca in a.checks.iter().filter(|c| c.name.contains("drift")) {
                let Some(cb) = b.checks.iter().find(|c| c.name == ca.name) else { continue };
                let order = (ca.value / cb.value).log2();
                match format {
                    ReportFormat::Text => {
                        let _ = writeln!(
                            out,
                            "convergence {} : {} -> {} ratio={} order={}",
                            ca.name,
                            da.display(),
                            db.display(),
                            ca.value / cb.value,
                            order
                        );
                    }
                    ReportFormat::Csv => {
                        let _ = writeln!(out, "{}|{},convergence_{},info,{},0", da.display(), db.display(), ca.name, order);
                    }
                }
            }
        }
    }
    if format == ReportFormat::Text {
        let _ = writeln!(out, "overall = {}", if all { "pass" } else { "fail" });
    }
    Ok((out, all))
}
