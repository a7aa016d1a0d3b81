//! Command-line front end: critical-point reports, phase classification,
//! gamma sweeps, backward iteration traces, condition sums and exact
//! finite-volume verification.
//!
//! Exit codes: 0 success (any verdict), 1 verification failure, 2 usage or
//! configuration error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cayley-ising",
    about = "Boundary-field analysis of the Ising model on Cayley trees under generation-dependent external fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical temperature/field and the fixed-point report at a field `h`
    Critical(CriticalArgs),
    /// Transition vs. uniqueness verdict for a perturbed critical field
    Classify(ClassifyArgs),
    /// Classify a grid of power-law exponents
    SweepGamma(SweepGammaArgs),
    /// Backward boundary-field iteration trace
    Iterate(IterateArgs),
    /// Condition sum S_n with sandwich bounds and growth classification
    ConditionSum(ConditionSumArgs),
    /// Exact finite-volume compatibility verification
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Tree order: children per non-root vertex
    #[arg(long, default_value_t = 2)]
    d: u32,

    /// Coupling strength J
    #[arg(long = "J", default_value_t = 1.0)]
    coupling: f64,

    /// Inverse temperature (exactly one of --beta / --theta)
    #[arg(long, conflicts_with = "theta")]
    beta: Option<f64>,

    /// tanh(beta J) supplied directly; beta is back-solved with J
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Power-law perturbation eps_n = n^(-gamma) of the critical minus field
    #[arg(long, conflicts_with_all = ["geom", "epsilon_file", "h"])]
    gamma: Option<f64>,

    /// Geometric perturbation eps_n = AMPLITUDE * RATIO^(n-1)
    #[arg(long, num_args = 2, value_names = ["RATIO", "AMPLITUDE"],
          conflicts_with_all = ["epsilon_file", "h"])]
    geom: Option<Vec<f64>>,

    /// File of perturbation values, one non-negative decimal per line,
    /// non-increasing; zero-padded past its end where depth requires
    #[arg(long, conflicts_with = "h")]
    epsilon_file: Option<PathBuf>,

    /// Homogeneous field: a number, or 'auto' (+h_c) / '-auto' (-h_c)
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Depth schedule (strictly increasing)
    #[arg(long, value_delimiter = ',', default_values_t = vec![250usize, 500, 1000, 2000, 4000])]
    depths: Vec<usize>,

    /// Probe generations
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 5, 10])]
    probes: Vec<usize>,

    /// Final-gap threshold above which the gap protocol calls Transition
    #[arg(long, default_value_t = 1e-4)]
    tau_gap: f64,

    /// Final-gap threshold below which the gap protocol calls Uniqueness
    #[arg(long, default_value_t = 1e-6)]
    tau_uniq: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (0 = library default); never affects output bytes
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct CriticalArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Field at which to report fixed points: number, 'auto' or '-auto'
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    h: String,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepGammaArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Power-law exponent grid
    #[arg(long, value_delimiter = ',', required = true)]
    gammas: Vec<f64>,

    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IterateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    profile: ProfileArgs,

    /// Deepest generation n (the seed sits at n+1)
    #[arg(long)]
    from: usize,

    /// Shallowest generation k
    #[arg(long, default_value_t = 1)]
    to: usize,

    /// Seed b_{n+1}: 'plus' (b+), 'minus' (b-), 'inf', 'minus-inf', or a number
    #[arg(long = "seed-b", allow_hyphen_values = true, default_value = "inf")]
    seed: String,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConditionSumArgs {
    #[command(flatten)]
    profile: ProfileArgs,

    /// Horizon n for the reported S_n
    #[arg(long, default_value_t = 1000)]
    n: usize,

    /// First index of the reported tail sum
    #[arg(long, default_value_t = 1)]
    tail_from: usize,

    /// Horizon schedule for the growth classification
    #[arg(long, value_delimiter = ',',
          default_values_t = vec![100usize, 200, 400, 800, 1600, 3200, 6400])]
    horizons: Vec<usize>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Tree order for single-case mode (grid mode when --depth is omitted)
    #[arg(long)]
    d: Option<u32>,

    /// Depth for single-case mode
    #[arg(long)]
    depth: Option<u32>,

    /// Inverse temperature for single-case mode
    #[arg(long)]
    beta: Option<f64>,

    /// Boundary field b_n for single-case mode
    #[arg(long, allow_hyphen_values = true)]
    bn: Option<f64>,

    /// Power-law exponent for a perturbed field prefix (single-case mode)
    #[arg(long)]
    gamma: Option<f64>,

    /// Field applied at the root
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    root_field: f64,

    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Critical(args) => commands::critical(args),
        Command::Classify(args) => commands::classify(args),
        Command::SweepGamma(args) => commands::sweep_gamma(args),
        Command::Iterate(args) => commands::iterate(args),
        Command::ConditionSum(args) => commands::condition_sum(args),
        Command::Verify(args) => commands::verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
