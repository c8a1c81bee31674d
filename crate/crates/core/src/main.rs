use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use severi::cli::{self, Format};

/// Exact regularity criterion for Severi varieties of nodal curves.
///
/// Exit status: 0 when every hypothesis holds, 1 when some hypothesis fails
/// (the report is still printed), 2 on invalid input or arguments.
#[derive(Parser)]
#[command(name = "severi", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a class on a surface described by a JSON file.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also evaluate F(delta) and (C-K)^2 - 4 delta at this node count.
        #[arg(long)]
        delta: Option<u64>,
        #[arg(long)]
        no_signature_check: bool,
    },
    /// Evaluate C = aH - L on a degree-d surface containing a line.
    Family {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        a: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Search bound for the minimal-a marker in CSV output (default 10d).
        #[arg(long)]
        a_cap: Option<i64>,
    },
    /// CSV table over a grid of (d, a).
    Scan {
        /// Smallest degree.
        #[arg(long)]
        d: i64,
        #[arg(long)]
        d_max: i64,
        /// Smallest a.
        #[arg(long)]
        a: i64,
        #[arg(long)]
        a_max: i64,
        #[arg(long)]
        a_cap: Option<i64>,
    },
    /// Run the two built-in example surfaces.
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = match args.command {
        Command::Check { input, format, delta, no_signature_check } => {
            cli::cmd_check(&input, format, delta, no_signature_check)
        }
        Command::Family { d, a, format, a_cap } => cli::cmd_family(d, a, format, a_cap),
        Command::Scan { d, d_max, a, a_max, a_cap } => cli::cmd_scan(d, d_max, a, a_max, a_cap),
        Command::Examples { format } => cli::cmd_examples(format),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
