//! Scenario files, run orchestration, Riccati studies and reports.

mod report;
mod run;
mod scenario;
mod study;

pub use report::{report, ReportFormat};
pub use run::{frequency_from_crossings, run, run_to_dir, summary_text, Check, Manifest, RunRecord, Series, Termination};
pub use scenario::{preset, CurveSpec, Diagnostics, MarkerSpec, Mode, Scenario, StrengthSpec, PRESETS};
pub use study::{riccati_study, CoefficientSpec, Family, Member, RandomFamily, StudyRow, StudyTable};
