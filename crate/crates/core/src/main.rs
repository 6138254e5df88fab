use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use psiminer::error::{ConfigError, Error};
use psiminer::pipeline::{discover, load_config, run};

/// Mine code2seq / JSONL datasets from Java-like sources.
#[derive(Parser)]
#[command(name = "psiminer-rs", version)]
struct Cli {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Validate the config and print the discovery plan without writing.
    #[arg(long)]
    dry_run: bool,
    /// Override the configured number of worker threads.
    #[arg(long)]
    parallelism: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let mut config = load_config(&cli.config)?;
    if let Some(n) = cli.parallelism {
        if n == 0 {
            return Err(ConfigError::new("--parallelism: must be a positive integer").into());
        }
        config.parallelism = n;
    }
    if cli.dry_run {
        print!("{}", discover(&config)?);
        return Ok(());
    }
    run(&config)?;
    Ok(())
}
