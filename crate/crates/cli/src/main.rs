use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lastmile_cli::{load_config, run_to_dir, CliError, Command, OutputFormat, ScenarioConfig};

#[derive(Parser)]
#[command(name = "lastmile", version, about = "Structured human-data labor models: steady state, calibration, portfolios, sorting, estimation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario file (TOML, or JSON when the extension is .json).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Root seed; overrides the config's `seed`.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR", env = "LASTMILE_OUT", default_value = "lastmile-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    format: OutputFormat,
    /// Suppress the summary line on stdout.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Closed-form steady state and comparative statics.
    SteadyState(RunArgs),
    /// Monte Carlo distribution of the steady-state share.
    Calibrate(RunArgs),
    /// Transition path towards the steady state.
    Simulate(RunArgs),
    /// Task-family portfolio with entry and drift; emits the maturity panel.
    Portfolio(RunArgs),
    /// Roy sorting on the final portfolio and the dispersion experiment.
    Roy(RunArgs),
    /// Drift-hazard decomposition, birth counts and indices from a panel.
    Estimate(RunArgs),
    /// Print the full default configuration as TOML.
    Defaults,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cmd, args) = match cli.command {
        Sub::Defaults => {
            print!("{}", ScenarioConfig::default().to_toml());
            return Ok(());
        }
        Sub::SteadyState(a) => (Command::SteadyState, a),
        Sub::Calibrate(a) => (Command::Calibrate, a),
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::Portfolio(a) => (Command::Portfolio, a),
        Sub::Roy(a) => (Command::Roy, a),
        Sub::Estimate(a) => (Command::Estimate, a),
    };
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let (out, manifest) = run_to_dir(cmd, &cfg, args.format, &args.out)?;
    if !args.quiet {
        println!("{}: {}", cmd.name(), out.headline);
        println!("wrote {} files to {}", manifest.outputs.len() + 1, args.out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::to_string(&e.record()).expect("error record serializes");
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
