use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kodaira_cli::commands::{self, CliError, Output};

#[derive(Parser)]
#[command(name = "kodaira", version, about = "Singular fibers, twists and group actions on elliptic surfaces over F_q(t)")]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Print JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, env = "KODAIRA_SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every singular fiber and report c2, chi and isotriviality.
    Analyze { file: PathBuf },
    /// Analyze the quadratic twist by a rational function d.
    Twist {
        file: PathBuf,
        #[arg(long)]
        d: String,
    },
    /// Compare fibers before and after pulling back by the n-th Frobenius.
    Frobenius {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        iters: u32,
    },
    /// Check a coaction file against a model.
    Action {
        file: PathBuf,
        #[arg(long)]
        coaction: PathBuf,
    },
    /// Supersingular count, Igusa curve genus and the genus bound.
    Igusa {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Genus of the base curve for the largest admissible n.
        #[arg(long, default_value_t = 0)]
        g: u64,
    },
    /// Decide whether two fiber types can be the only singular fibers.
    Lattice {
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        #[arg(long)]
        p: u64,
    },
    /// Run the built-in regression catalog.
    Catalog {
        /// Glob on entry ids.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze { file } => commands::analyze_text(&read(file)?),
        Command::Twist { file, d } => commands::twist(&read(file)?, d),
        Command::Frobenius { file, iters } => commands::frobenius(&read(file)?, *iters),
        Command::Action { file, coaction } => commands::action(&read(file)?, &read(coaction)?),
        Command::Igusa { p, n, g } => commands::igusa_cmd(*p, *n, *g),
        Command::Lattice { t1, t2, p } => commands::lattice(t1, t2, *p),
        Command::Catalog { filter } => commands::catalog_cmd(filter.as_deref(), cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.text {
                print!("{}", out.text);
            } else {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.text {
                eprintln!("error: {}", e);
            } else {
                eprintln!("{}", e.to_json());
            }
            ExitCode::from(2)
        }
    }
}
