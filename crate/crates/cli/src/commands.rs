use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use floorsim::results::{read_rows, summarize, write_rows, write_summary, Kpi, ResultRow, ResultsError};
use floorsim::scenario::{load_file, preset, run_replications, run_sweep, LoadError, ScenarioConfig, SweepSpec};
use floorsim::{ConfigError, Execution, SimError};
use thiserror::Error;

use crate::chart::render_chart;
use crate::{Command, Overrides, ScenarioArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid scenario:\n  {}", .0.violations.join("\n  "))]
    Invalid(ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    MissingInput { path: String, reason: String },
    #[error("cannot write {path}: {reason}")]
    Unwritable { path: String, reason: String },
    #[error("{path}: {reason}")]
    MalformedResults { path: String, reason: String },
    #[error("unknown KPI '{0}' (expected one of: {names})", names = Kpi::ALL.map(|k| k.name()).join(", "))]
    UnknownKpi(String),
    #[error("simulation failed: {0}")]
    Model(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Usage(_) => 2,
            CliError::MissingInput { .. } => 3,
            CliError::Unwritable { .. } => 4,
            CliError::MalformedResults { .. } => 5,
            CliError::UnknownKpi(_) => 6,
            CliError::Model(_) => 7,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(c) => CliError::Invalid(c),
            SimError::Model(m) => CliError::Model(m.to_string()),
        }
    }
}

/// Caps the worker pool at `SIM_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SIM_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SIM_THREADS must be a positive integer, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("SIM_THREADS: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Validate { scenario } => {
            let config = load(scenario)?;
            println!("ok: {} ({} staff, {} weeks)", config.name, config.staffing.total(), config.weeks);
            Ok(())
        }
        Command::Run { scenario, overrides, output } => {
            let config = configure(scenario, overrides)?;
            let reports = run_replications(&config, Execution::default())?;
            let rows: Vec<ResultRow> =
                reports.iter().enumerate().map(|(i, r)| ResultRow::from_report(0, i as u32, r)).collect();
            write_tables(output, "replications.csv", &rows)
        }
        Command::SweepTills { scenario, overrides, output } => {
            let spec = SweepSpec::tills(configure(scenario, overrides)?);
            sweep(&spec, output)
        }
        Command::SweepExperts { scenario, overrides, output } => {
            let spec = SweepSpec::experts(configure(scenario, overrides)?);
            sweep(&spec, output)
        }
        Command::Report { results, kpi, output } => report(results, kpi, output),
    }
}

fn load(scenario: &ScenarioArgs) -> Result<ScenarioConfig, CliError> {
    match (&scenario.config, scenario.preset) {
        (Some(path), _) => load_file(path).map_err(|e| match e {
            LoadError::Io(path, reason) => CliError::MissingInput { path, reason },
            LoadError::Invalid(c) => CliError::Invalid(c),
        }),
        (None, Some(dept)) => Ok(preset(dept)),
        (None, None) => Err(CliError::Usage("one of --config or --preset is required".into())),
    }
}

fn configure(scenario: &ScenarioArgs, o: &Overrides) -> Result<ScenarioConfig, CliError> {
    let mut config = load(scenario)?;
    if let Some(seed) = o.seed {
        config.seed = seed;
    }
    if let Some(n) = o.replications {
        config.replications = n;
    }
    if let Some(w) = o.weeks {
        config.weeks = w;
    }
    if let Some(w) = o.warmup_weeks {
        config.warmup_weeks = w;
    }
    config.validate().map_err(CliError::Invalid)?;
    Ok(config)
}

fn sweep(spec: &SweepSpec, output: &Path) -> Result<(), CliError> {
    let result = run_sweep(spec, Execution::default())?;
    write_tables(output, "results.csv", &result.rows())
}

fn unwritable(path: &Path, e: impl ToString) -> CliError {
    CliError::Unwritable { path: path.display().to_string(), reason: e.to_string() }
}

/// Writes the per-replication table and its per-arm summary into `dir`.
fn write_tables(dir: &Path, name: &str, rows: &[ResultRow]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| unwritable(dir, e))?;
    write_file(&dir.join(name), |w| write_rows(w, rows))?;
    write_file(&dir.join("summary.csv"), |w| write_summary(w, rows))?;
    eprintln!("wrote {} rows to {}", rows.len(), dir.join(name).display());
    Ok(())
}

fn write_file(path: &PathBuf, body: impl FnOnce(&mut BufWriter<File>) -> Result<(), ResultsError>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| unwritable(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(|e| unwritable(path, e))?;
    w.flush().map_err(|e| unwritable(path, e))
}

fn report(results: &Path, kpi: &str, output: &Path) -> Result<(), CliError> {
    let kpi: Kpi = kpi.parse().map_err(|_| CliError::UnknownKpi(kpi.to_string()))?;
    let file = File::open(results)
        .map_err(|e| CliError::MissingInput { path: results.display().to_string(), reason: e.to_string() })?;
    let malformed = |reason: String| CliError::MalformedResults { path: results.display().to_string(), reason };
    let rows = read_rows(io::BufReader::new(file)).map_err(|e| match e {
        ResultsError::Io(e) => CliError::MissingInput { path: results.display().to_string(), reason: e.to_string() },
        other => malformed(other.to_string()),
    })?;
    if rows.is_empty() {
        return Err(malformed(ResultsError::Empty.to_string()));
    }
    let svg = render_chart(&summarize(&rows, kpi), kpi.name());
    if let Some(dir) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| unwritable(dir, e))?;
    }
    fs::write(output, svg).map_err(|e| unwritable(output, e))?;
    eprintln!("wrote {}", output.display());
    Ok(())
}
