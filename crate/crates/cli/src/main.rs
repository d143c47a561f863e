use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use switchlab::{execute, Axis, CliError, Command, Format, Report, RunConfig, ScenarioSource};

#[derive(Parser)]
#[command(name = "switchlab", version, about = "Complementarity checks for the quantum switch")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run every relation check on a scenario and on seeded random samples.
    Verify(Opts),
    /// Report the quantities of a single scenario.
    Run(Opts),
    /// Evaluate the quantities over one or two parameter axes.
    Sweep(Opts),
    /// Sample the commuting-sector region on a p × overlap grid.
    Region(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Built-in scenario name or path to a scenario file.
    #[arg(long, default_value = "explicit-realization")]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random scenarios checked by `verify`.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// `name:start:stop:steps` with name one of p, theta, phi, overlap.
    #[arg(long = "axis", value_parser = parse_axis)]
    axes: Vec<Axis>,
    /// Adds a no-go violation margin column with this weight.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Replaces the tolerance of every check.
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn config(sub: Sub) -> RunConfig {
    let (command, opts) = match sub {
        Sub::Verify(o) => (Command::Verify, o),
        Sub::Run(o) => (Command::Run, o),
        Sub::Sweep(o) => (Command::Sweep, o),
        Sub::Region(o) => (Command::Region, o),
    };
    let mut cfg = RunConfig::new(command, ScenarioSource::parse(&opts.scenario));
    cfg.seed = opts.seed;
    cfg.samples = opts.samples;
    cfg.out = opts.out;
    cfg.format = match opts.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    cfg.axes = opts.axes;
    cfg.alpha = opts.alpha;
    cfg.tol = opts.tol;
    cfg
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.clone(), source };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            report.table.write(cfg.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let mut w = io::stdout().lock();
            report.table.write(cfg.format, &mut w).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config(cli.command);
    let result = execute(&cfg).and_then(|report| emit(&cfg, &report).map(|()| report));
    match result {
        Ok(report) => {
            for f in &report.failures {
                eprintln!("FAILED {f}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
