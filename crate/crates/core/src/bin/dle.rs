use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dle::linalg::DEFAULT_REL_TOL;
use dle::report::{self, Command, Input, Report, RunConfig, Status};
use dle::timestep::DEFAULT_CONSTRAINT_TOL;
use dle::{Error, Result};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    /// Per-step matrices, ranks and constraints.
    Build,
    /// Evolve an initial state through every step.
    Evolve,
    /// Dimensions of the global solution spaces.
    Analyze,
    /// Run the invariant suites.
    Check,
}

impl From<CommandArg> for Command {
    fn from(arg: CommandArg) -> Self {
        match arg {
            CommandArg::Build => Command::Build,
            CommandArg::Evolve => Command::Evolve,
            CommandArg::Analyze => Command::Analyze,
            CommandArg::Check => Command::Check,
        }
    }
}

/// Canonical evolution of linear discrete-time systems.
#[derive(Debug, Parser)]
#[command(name = "dle", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    /// Lattice JSON or step-matrix JSON (`{"steps": [{"L", "R", "Rbar"}]}`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Initial state as comma-separated `x` then `p`.
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    /// Free parameters per step, steps separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Second initial state; its symplectic product with `y0` is reported per slice.
    #[arg(long, allow_hyphen_values = true)]
    companion: Option<String>,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_CONSTRAINT_TOL)]
    constraint_tol: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Project states onto the pre-constraint surface instead of rejecting them.
    #[arg(long)]
    project: bool,
    /// Emit a single JSON document.
    #[arg(long)]
    machine: bool,
}

fn parse_csv(text: &str, flag: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("--{flag}: `{}` is not a number", item.trim())))
        })
        .collect()
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::new(cli.command.into());
    config.rel_tol = cli.rel_tol;
    config.constraint_tol = cli.constraint_tol;
    config.seed = cli.seed;
    config.iterations = cli.iterations;
    config.project = cli.project;
    config.y0 = cli.y0.as_deref().map(|t| parse_csv(t, "y0")).transpose()?;
    config.companion = cli.companion.as_deref().map(|t| parse_csv(t, "companion")).transpose()?;
    config.lambdas = cli
        .lambda
        .as_deref()
        .map(|t| t.split(';').map(|step| parse_csv(step, "lambda")).collect())
        .transpose()?;
    Ok(config)
}

fn execute(cli: &Cli) -> Result<Report> {
    let config = config(cli)?;
    let input = match &cli.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            Some(Input::parse(&text)?)
        }
        None => None,
    };
    report::run(&config, input.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = Command::from(cli.command);
    let report = execute(&cli).unwrap_or_else(|e| {
        eprintln!("dle {}: {e}", command.name());
        Report::error(command, &e)
    });
    match report.status {
        Status::Rejected => {
            let data = &report.data;
            eprintln!(
                "dle evolve: {} rejected at slice {} (residual {})",
                data["trajectory"].as_str().unwrap_or("state"),
                data["slice"],
                data["residual"]
            );
        }
        Status::Failed => {
            let failed: Vec<&str> = report.data["invariants"]
                .as_array()
                .into_iter()
                .flatten()
                .filter(|inv| inv["passed"] == false)
                .filter_map(|inv| inv["name"].as_str())
                .collect();
            eprintln!("dle check: failed invariants: {}", failed.join(", "));
        }
        Status::Ok | Status::Error => {}
    }
    // a closed pipe on stdout is not an error worth reporting
    let mut out = std::io::stdout().lock();
    if cli.machine {
        let _ = writeln!(out, "{}", report.to_json());
    } else if report.status != Status::Error {
        let _ = write!(out, "{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}
