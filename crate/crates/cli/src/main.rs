//! `floorsim` command-line runner.
//!
//! Exit codes:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 1    | scenario failed validation                |
//! | 2    | bad command line (including SIM_THREADS)  |
//! | 3    | input file missing or unreadable          |
//! | 4    | output location not writable              |
//! | 5    | results CSV malformed or empty            |
//! | 6    | unknown KPI name                          |
//! | 7    | simulation aborted on an internal error   |

mod chart;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use floorsim::scenario::Department;

#[derive(Debug, Parser)]
#[command(name = "floorsim", version, about = "Retail floor staffing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario and list every problem found.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run one scenario's replications; writes replications.csv and summary.csv.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Sweep the number of tills open (1..9); writes results.csv and summary.csv.
    SweepTills {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Sweep the number of expert sellers (0..4); writes results.csv and summary.csv.
    SweepExperts {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Render one KPI of a results CSV as an SVG line chart (mean with a ±1 sd band).
    Report {
        /// Results CSV written by a run or sweep.
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "service_level_index")]
        kpi: String,
        /// Chart file to write.
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in department preset.
    #[arg(long, value_parser = parse_department)]
    pub preset: Option<Department>,
}

#[derive(Debug, Args)]
pub struct Overrides {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<u32>,
    #[arg(long)]
    pub weeks: Option<u32>,
    #[arg(long)]
    pub warmup_weeks: Option<u32>,
}

fn parse_department(s: &str) -> Result<Department, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = commands::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match commands::execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
