use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tamedet::checks::Fault;

mod commands;
mod render;

/// Tame symbols and commutator determinants for rational circle symbols.
#[derive(Parser, Debug)]
#[command(name = "tamedet", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// First symbol, e.g. "(z-0.3)/(z+0.4)"
    #[arg(long = "a", global = true, allow_hyphen_values = true)]
    pub symbol_a: Option<String>,

    /// Second symbol
    #[arg(long = "b", global = true, allow_hyphen_values = true)]
    pub symbol_b: Option<String>,

    /// Starting truncation size for the doubling driver
    #[arg(long, global = true, default_value_t = 16)]
    pub m0: usize,

    /// Convergence and agreement tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = 6)]
    pub max_doublings: usize,

    /// Roots this close to the unit circle are rejected
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tau_circle: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Inject a fault: none | naive-inverse | drop-sign
    #[arg(long, global = true, default_value = "none")]
    pub fault: Fault,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// pi, delta and (at winding zero) the commutator determinant for --a, --b
    Analyze,
    /// Run the seeded property suite
    Check,
    /// Fourier coefficients of --a on an index range, analytic and sampled
    Fourier {
        #[arg(long, allow_negative_numbers = true, default_value_t = -4)]
        n_lo: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 4)]
        n_hi: i64,
    },
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which here means "no convergence"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::Status::Input as u8 } else { 0 });
        }
    };
    let out = match cli.command {
        Command::Analyze => commands::analyze(&cli.run),
        Command::Check => commands::check(&cli.run),
        Command::Fourier { n_lo, n_hi } => commands::fourier(&cli.run, n_lo, n_hi),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.status as u8)
}
