use clap::{Parser, Subcommand};
use fpsearch::{Experiment, ExperimentConfig, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fpsearch", version, about = "Fixed-point quantum search simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment.
    Run {
        experiment: String,
        /// TOML config file; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory, overriding `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dotted `key=value` override, e.g. `errors.eps=[0.0,0.1]`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the available experiments.
    List,
    /// Run the invariant suite.
    Verify,
}

fn run(
    experiment: &str,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    overrides: &[String],
) -> Result<(), HarnessError> {
    let experiment: Experiment = experiment.parse()?;
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(experiment, &path, overrides)?,
        None => ExperimentConfig::parse(experiment, "", overrides)?,
    };
    if let Some(dir) = out {
        cfg.output_dir = dir;
    }
    let artifacts = fpsearch::run_and_write(&cfg)?;
    for a in &artifacts {
        println!("{}", cfg.output_dir.join(&a.path).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { experiment, config, out, overrides } => {
            match run(&experiment, config, out, &overrides) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("fpsearch: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<12} {}", e.name(), e.description());
            }
            ExitCode::SUCCESS
        }
        Command::Verify => {
            let outcomes = fpsearch::verify::run_all();
            let mut failed = 0;
            for o in &outcomes {
                match &o.result {
                    Ok(()) => println!("PASS  {}", o.name),
                    Err(msg) => {
                        failed += 1;
                        println!("FAIL  {}: {msg}", o.name);
                    }
                }
            }
            println!("{} checks, {failed} failed", outcomes.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
