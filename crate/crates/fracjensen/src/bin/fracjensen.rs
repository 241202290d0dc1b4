use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use fracjensen::cli::{self, Command, OutputFormat, Overrides};

#[derive(Clone, Copy, ValueEnum)]
enum CommandArg {
    Integrate,
    Derive,
    Check,
    Sweep,
    Falsify,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

/// Fractional-integral operators and Jensen/Mercer slack certificates.
#[derive(Parser)]
#[command(name = "fracjensen", version)]
struct Args {
    /// Job kind; must agree with the job file's `command` key.
    #[arg(value_enum)]
    command: CommandArg,
    /// Path to a `key = value` job file.
    #[arg(long)]
    job: PathBuf,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FRACJENSEN_THREADS") {
        match threads.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("error: FRACJENSEN_THREADS: not an integer: `{threads}`");
                return ExitCode::from(cli::EXIT_CONFIG as u8);
            }
        }
    }
    let args = Args::parse();
    let overrides = Overrides {
        command: Some(match args.command {
            CommandArg::Integrate => Command::Integrate,
            CommandArg::Derive => Command::Derive,
            CommandArg::Check => Command::Check,
            CommandArg::Sweep => Command::Sweep,
            CommandArg::Falsify => Command::Falsify,
        }),
        output: args.output,
        format: args.format.map(|f| match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Csv => OutputFormat::Csv,
        }),
        seed: args.seed,
        tolerance: args.tolerance,
    };
    ExitCode::from(cli::run(&args.job, &overrides) as u8)
}
