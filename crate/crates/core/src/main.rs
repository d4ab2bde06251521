use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vortex_sheet::harness::{preset, report, riccati_study, run_to_dir, Family, ReportFormat, Scenario};
use vortex_sheet::SheetError;

/// Vortex-sheet simulations and blow-up diagnostics.
///
/// Exit status: 0 when every enabled check passes, 1 when a scientific check
/// fails, 2 on usage or I/O errors.
#[derive(Parser)]
#[command(name = "vsheet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, or a preset given as `preset:<name>`.
    Run {
        scenario: String,
        /// Output directory (default: ./runs/<scenario name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the velocity sums (results do not depend on it).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Integrate a family of Riccati equations and fit their blow-up.
    Riccati {
        family: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise finished runs and write plot data next to their series.
    Report {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a scenario file and build its initial state without running it.
    Validate { scenario: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

fn load_scenario(arg: &str) -> Result<Scenario, SheetError> {
    match arg.strip_prefix("preset:") {
        Some(name) => preset(name),
        None => Scenario::load(&PathBuf::from(arg)),
    }
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn execute(cli: Cli) -> Result<ExitCode, SheetError> {
    match cli.command {
        Command::Run { scenario, out, threads } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build_global()
                    .map_err(|e| SheetError::InvalidInput(e.to_string()))?;
            }
            let sc = load_scenario(&scenario)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("runs").join(&sc.name));
            let rec = run_to_dir(&sc, &dir)?;
            print!("{}", rec.summary());
            Ok(verdict(rec.manifest.passes()))
        }
        Command::Riccati { family, out } => {
            let fam = Family::from_toml(&std::fs::read_to_string(&family)?)?;
            let table = riccati_study(&fam)?;
            let text = table.to_text();
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("riccati.txt"), &text)?;
            }
            print!("{text}");
            Ok(verdict(table.passes()))
        }
        Command::Report { dirs, format } => {
            let format = match format {
                Format::Text => ReportFormat::Text,
                Format::Csv => ReportFormat::Csv,
            };
            let (text, pass) = report(&dirs, format)?;
            print!("{text}");
            Ok(verdict(pass))
        }
        Command::Validate { scenario } => {
            let sc = load_scenario(&scenario)?;
            let state = sc.initial_state()?;
            println!(
                "{}: N={} steps={} dt={}",
                sc.name,
                state.n_points(),
                sc.config.n_steps(),
                sc.config.dt
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("vsheet: {e}");
            ExitCode::from(2)
        }
    }
}
