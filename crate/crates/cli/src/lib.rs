//! Command-line plumbing for `lastmile-core`: configuration parsing,
//! subcommand pipelines and deterministic CSV/JSON emission.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{load_config, parse_config, Encoding, ScenarioConfig};
pub use error::CliError;
pub use output::{OutputFormat, RunManifest};
pub use run::{execute, Command, RunOutput};

use std::path::Path;

/// SHA-256 of the resolved configuration in canonical JSON form.
pub fn config_digest(cfg: &ScenarioConfig) -> String {
    output::sha256_hex(&output::to_json(cfg))
}

/// Runs `cmd` and writes its outputs plus a manifest into `out_dir`.
pub fn run_to_dir(
    cmd: Command,
    cfg: &ScenarioConfig,
    format: OutputFormat,
    out_dir: &Path,
) -> Result<(RunOutput, RunManifest), CliError> {
    let out = execute(cmd, cfg, format)?;
    let manifest = output::write_outputs(out_dir, &out.files, cmd.name(), cfg.seed, config_digest(cfg))?;
    Ok((out, manifest))
}
