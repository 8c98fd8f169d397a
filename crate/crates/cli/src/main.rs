mod cli;
mod commands;
mod report;
mod system;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use cli::{Cli, Command, ExperimentConfig, Format, OutputArgs};

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("ConfigInvalid: cannot read {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(anyhow::Error::from)
    } else {
        toml::from_str(&text).map_err(anyhow::Error::from)
    };
    parsed.with_context(|| format!("ConfigInvalid: {}", path.display()))
}

/// Command-line output flags override the config file's.
fn merge(cli: OutputArgs, file: OutputArgs) -> OutputArgs {
    OutputArgs {
        out: cli.out.or(file.out),
        format: cli.format.or(file.format),
        threads: cli.threads.or(file.threads),
        seed: cli.seed.or(file.seed),
    }
}

fn resolve(cli: Cli) -> Result<(Command, OutputArgs)> {
    match (cli.config, cli.command) {
        (Some(path), None) => {
            let cfg = load_config(&path)?;
            Ok((cfg.command, merge(cli.output, cfg.output)))
        }
        (None, Some(cmd)) => Ok((cmd, cli.output)),
        (Some(_), Some(_)) => bail!("ConfigInvalid: give either --config or a subcommand, not both"),
        (None, None) => bail!("ConfigInvalid: no command given; see --help"),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let (cmd, output) = resolve(cli)?;
    if let Some(n) = output.threads {
        if n == 0 {
            bail!("ConfigInvalid: --threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    log::debug!("running {}", cmd.name());
    let report = commands::run(&cmd, output.seed).with_context(|| format!("{} failed", cmd.name()))?;
    let format = match cmd {
        Command::Plot(_) => Format::Csv,
        _ => output.format.unwrap_or_default(),
    };
    report.emit(format, output.out.as_deref())?;
    Ok(report.failed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DENDRODYN_LOG")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
