use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fhjam",
    version,
    about = "Noise-jamming simulator for a frequency-hopping PAN link"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write its time series.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also render SVG charts.
        #[arg(long)]
        svg: bool,
    },
    /// Emit the data series for one figure (2, 3, 4, 5, 6 or 7).
    Figure {
        #[arg(value_parser = ["2", "3", "4", "5", "6", "7"])]
        number: String,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Summarize one scenario, or the whole preset grid with --grid.
    Summary {
        /// Run all nine preset scenario/power combinations.
        #[arg(long)]
        grid: bool,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct ScenarioArgs {
    /// Scenario file in `key = value` format.
    #[arg(long, conflicts_with = "preset")]
    pub scenario: Option<PathBuf>,
    /// Built-in scenario, e.g. `scenario3:5w`.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub slots: Option<u64>,
    /// Hop-sequence seed; falls back to FHJAM_SEED, then the scenario's own.
    #[arg(long, env = "FHJAM_SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_parser = ["paper", "physical"])]
    pub mode: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run { scenario, out, svg } => commands::run(&scenario, &out, svg),
        Command::Figure {
            number,
            scenario,
            out,
            svg,
        } => commands::figure(&number, &scenario, &out, svg),
        Command::Summary {
            grid,
            scenario,
            out,
        } => commands::summary(grid, &scenario, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fhjam: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}
