//! `qdgate`: runs one engine command from a `key = value` config file and
//! writes a CSV or key=value data file with a `#` provenance header.

mod config;
mod error;
mod run;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Config, KEYS};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qdgate", version, about = "Adiabatic two-qubit phase gate simulator")]
struct Args {
    /// Run configuration (`key = value` per line)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Data file; overrides `output_path`. Standard output when neither is set
    #[arg(long)]
    output: Option<PathBuf>,

    /// Worker threads for parallel simulations (default: number of processors)
    #[arg(long)]
    threads: Option<usize>,

    /// Command to run; overrides `command` in the config
    #[arg(long)]
    command: Option<String>,

    /// Print every accepted config key and exit
    #[arg(long)]
    list_keys: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if args.list_keys {
        for (k, doc) in KEYS {
            println!("{k:<28} {doc}");
        }
        return ExitCode::SUCCESS;
    }
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdgate: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(args: Args) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    if let Some(c) = &args.command {
        cfg.set("command", c);
    }
    let command: Command = cfg
        .raw("command")
        .ok_or_else(|| CliError::Config("missing required key `command` (or --command)".into()))?
        .parse()
        .map_err(|e| CliError::Config(format!("key `command`: {e}")))?;

    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }

    let output = args.output.or_else(|| cfg.raw("output_path").map(PathBuf::from));
    let out = run::run(command, &mut cfg)?;

    let mut stdout = std::io::stdout().lock();
    match output {
        Some(path) => {
            fs::write(&path, format!("{}{}", out.header, out.body))
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            stdout.write_all(out.summary.as_bytes())?;
        }
        None => {
            stdout.write_all(out.header.as_bytes())?;
            stdout.write_all(out.body.as_bytes())?;
            if out.summary != out.body {
                stdout.write_all(out.summary.as_bytes())?;
            }
        }
    }
    Ok(())
}
