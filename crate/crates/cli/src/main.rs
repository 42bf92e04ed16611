use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use braidext_cli::{run_file, Command, Emit, Options};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "braidext", version, about = "Obstructions and torsors for braided 2-group extensions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// exit with status 1 on a mathematical negative (not liftable, failed check, ...)
    #[arg(long, global = true)]
    strict: bool,

    /// lift the scale guards
    #[arg(long, global = true)]
    force: bool,

    #[arg(long, global = true, value_enum, default_value_t = EmitArg::Text)]
    emit: EmitArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every validator on the objects in the file
    Validate { file: PathBuf },
    /// H^n(G, M) for the file's coefficients
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        /// include generating cocycles
        #[arg(long)]
        representatives: bool,
    },
    /// Obstruction class, liftability and the H^3 torsor
    Classify { file: PathBuf },
    /// The extension of G by A given by omega
    Extension {
        file: PathBuf,
        /// build even when omega is not a cocycle and report the failure of associativity
        #[arg(long)]
        diagnose: bool,
    },
    /// Enumerate the (k, theta) data completing (B, phi, psi)
    SearchActions {
        file: PathBuf,
        /// refuse to list more than this many data
        #[arg(long, default_value_t = 4096)]
        limit: u128,
        #[arg(long)]
        count_only: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        strict: cli.strict,
        force: cli.force,
        emit: match cli.emit {
            EmitArg::Json => Emit::Json,
            EmitArg::Text => Emit::Text,
        },
    };
    let (command, file) = match cli.command {
        Cmd::Validate { file } => (Command::Validate, file),
        Cmd::Cohomology {
            file,
            degree,
            representatives,
        } => (
            Command::Cohomology {
                degree,
                representatives,
            },
            file,
        ),
        Cmd::Classify { file } => (Command::Classify, file),
        Cmd::Extension { file, diagnose } => (Command::Extension { diagnose }, file),
        Cmd::SearchActions {
            file,
            limit,
            count_only,
        } => (Command::SearchActions { limit, count_only }, file),
    };
    let out = run_file(&command, &file, &opts);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
