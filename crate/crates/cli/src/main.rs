use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quivhom::exactlin::Field;

mod commands;
mod render;

use commands::{CliError, Config, Outcome, Status};

#[derive(Parser, Debug)]
#[command(name = "quivhom", version, about = "Homological checks for quotients of quiver categories")]
struct Cli {
    /// Field override: `gf:P` or `q`.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Degree bound for Ext, Tor and resolutions.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=64))]
    degree: u32,
    /// Truncation index for the built-in staircase family.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..=64))]
    truncate: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the category and print its hom dimensions.
    Build { spec: PathBuf },
    /// Dimensions of Ext^0..Ext^degree between two modules (a declared name, `P(x)` or `S(x)`).
    Ext { spec: PathBuf, left: String, right: String },
    /// Check strong idempotency of a declared ideal (or `zero`).
    CheckSie { spec: PathBuf, ideal: String },
    /// Evidence report for the one-point extension by a module (default `M`).
    /// Without a spec, uses the staircase base at `--truncate`.
    OnePoint { spec: Option<PathBuf>, module: Option<String> },
    /// Evidence report for the quotient by a declared ideal.
    Report { spec: PathBuf, ideal: String },
    /// Run the `check` directives of a spec.
    Run { spec: PathBuf },
    /// Print a built-in example spec: `staircase` (with `--truncate`), `dual-numbers`, `a3-zero-relation`.
    Example { name: String },
    /// Quick internal consistency checks on built-in and seeded random inputs.
    SelfCheck,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = Config {
        field: cli.field,
        degree: cli.degree as usize,
        truncate: cli.truncate.map(|t| t as usize),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Build { spec } => commands::build(&cfg, spec),
        Command::Ext { spec, left, right } => commands::ext(&cfg, spec, left, right),
        Command::CheckSie { spec, ideal } => commands::check_sie(&cfg, spec, ideal),
        Command::OnePoint { spec, module } => commands::one_point(&cfg, spec.as_deref(), module.as_deref()),
        Command::Report { spec, ideal } => commands::report(&cfg, spec, ideal),
        Command::Run { spec } => commands::run_checks(&cfg, spec),
        Command::Example { name } => commands::example(&cfg, name),
        Command::SelfCheck => commands::self_check(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("serializable output"),
        Format::Text => outcome.text.clone(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    match outcome.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Failed => ExitCode::from(1),
    }
}
