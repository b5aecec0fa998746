use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conmms::dispatch::AllocClass;
use conmms::generate::GenSpec;
use conmms::oracle::OracleConfig;
use conmms_cli::batch::{run_batch, to_csv};
use conmms_cli::commands::{self, read_file};
use conmms_cli::files::parse_value;
use conmms_cli::{CliError, CliResult, Status};

#[derive(Parser)]
#[command(name = "conmms", version, about = "Approximate maximin-share allocation of goods on graphs")]
struct Cli {
    /// Largest region, in vertices, the exact oracle will search.
    #[arg(long, global = true, default_value_t = OracleConfig::default().cap)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph classes an instance belongs to.
    Recognize { file: PathBuf },
    /// Print maximin shares with witness partitions.
    Mms {
        file: PathBuf,
        #[arg(long)]
        agent: Option<usize>,
    },
    /// Allocate, certify, and write the allocation file.
    Allocate {
        file: PathBuf,
        #[arg(long, default_value = "auto", value_parser = parse_class)]
        class: AllocClass,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an allocation file against an instance.
    Verify {
        instance: PathBuf,
        allocation: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Write a random instance.
    Gen {
        #[arg(long, value_parser = parse_class)]
        class: AllocClass,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        max_utility: u32,
        #[arg(long, default_value_t = 0)]
        min_utility: u32,
        /// Number of distinct utility functions; one per agent by default.
        #[arg(long)]
        types: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the trials listed in a JSON config and write one CSV row each.
    Batch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_class(s: &str) -> Result<AllocClass, String> {
    s.parse().map_err(|e: conmms::Error| e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::new(Status::Unsupported, format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<Status> {
    let config = OracleConfig::with_cap(cli.cap);
    match cli.command {
        Command::Recognize { file } => {
            print!("{}", commands::recognize(&read_file(&file)?)?);
            Ok(Status::Pass)
        }
        Command::Mms { file, agent } => {
            print!("{}", commands::mms_report(&read_file(&file)?, agent, &config)?);
            Ok(Status::Pass)
        }
        Command::Allocate { file, class, out } => {
            let a = commands::allocate(&read_file(&file)?, class, &config)?;
            emit(out.as_deref(), &a.file.to_json())?;
            eprint!("{}", a.summary);
            Ok(a.status)
        }
        Command::Verify { instance, allocation, alpha } => {
            let alpha = parse_value(&alpha)?;
            let (text, status) = commands::verify(&read_file(&instance)?, &read_file(&allocation)?, &alpha, &config)?;
            print!("{text}");
            Ok(status)
        }
        Command::Gen { class, seed, vertices, agents, max_utility, min_utility, types, out } => {
            let spec = GenSpec { class, seed, vertices, agents, min_utility, max_utility, types };
            emit(out.as_deref(), &commands::gen(&spec)?)?;
            Ok(Status::Pass)
        }
        Command::Batch { config: path, out } => {
            let r = run_batch(&read_file(&path)?, &config)?;
            emit(out.as_deref(), &to_csv(&r.rows))?;
            for e in &r.errors {
                eprintln!("error: {e}");
            }
            Ok(r.status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Status::Parse.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status.code() as u8)
        }
    }
}
