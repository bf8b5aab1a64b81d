//! Scenario-driven batch runner.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config parse error, 3 validation
//! error, 4 numerical blow-up (partial outputs carry a FAILED manifest marker).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadwave_cli::exec::{self, CliError};
use quadwave_cli::presets;

#[derive(Parser)]
#[command(
    name = "quadwave",
    about = "Wave-packet simulations of the quadrature-picture Rabi and Jaynes-Cummings models",
    version
)]
struct Cli {
    /// Worker threads for sweep points (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario config.
    Run {
        config: PathBuf,
        /// Override the [output].directory of the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run at dt/2 and report per-observable convergence.
        #[arg(long)]
        dt_check: bool,
    },
    /// Run a fidelity sweep over the [sweep] axes of a config.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute a built-in preset.
    Preset {
        name: String,
        /// Output root (panel subdirectories are created below it).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dt_check: bool,
    },
    /// List the built-in presets.
    ListPresets,
}

fn read_config(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            dt_check,
        } => {
            let text = read_config(&config)?;
            exec::run_config(&text, out.as_deref(), dt_check)
        }
        Command::Sweep { config, out } => {
            let text = read_config(&config)?;
            exec::sweep_config(&text, out.as_deref(), cli.workers)
        }
        Command::Preset {
            name,
            out,
            dt_check,
        } => {
            let preset = presets::find(&name).ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown preset '{name}'; see `quadwave list-presets`"
                ))
            })?;
            for (subdir, text) in preset.panels {
                let panel_out: Option<PathBuf> = out.as_ref().map(|root| {
                    if subdir.is_empty() {
                        root.clone()
                    } else {
                        root.join(subdir)
                    }
                });
                if preset.sweep {
                    exec::sweep_config(text, panel_out.as_deref(), cli.workers)?;
                } else {
                    exec::run_config(text, panel_out.as_deref(), dt_check)?;
                }
            }
            Ok(())
        }
        Command::ListPresets => {
            for p in presets::presets() {
                println!("{:8}  {}", p.name, p.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
