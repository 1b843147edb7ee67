use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod modp;

#[derive(Parser, Debug)]
#[command(name = "dyndeg", version, about = "Certified dynamical degrees of rational maps of projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Map file (JSON)
    #[arg(long)]
    pub map: PathBuf,
    /// Oracle cache file, read if present and rewritten afterwards
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Term budget for exact composition of projective maps
    #[arg(long, default_value_t = 200_000)]
    pub max_terms: usize,
    /// Degree limit for the line images used once exact composition stops
    #[arg(long, default_value_t = 1 << 17)]
    pub max_line_degree: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 3)]
    pub precision_bits: u32,
    #[arg(long, default_value_t = 20_000)]
    pub budget_candidates: u64,
    #[arg(long, default_value_t = 4096)]
    pub budget_iterate: u64,
    /// Disable candidates seeded from observed degree ratios
    #[arg(long)]
    pub no_seeding: bool,
    /// Worker threads (0: one per core)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Exit with status 3 unless the result is certified
    #[arg(long)]
    pub strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of deg_i(f^n) for n = 0..=n_max
    Degrees {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 8)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enclosure of lambda_i by certified enumeration
    Lambda {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        solve: SolveArgs,
        /// Stop at the first certificate whose bound exceeds this rational
        #[arg(long)]
        lower_bound_target: Option<String>,
        /// Write the winning certificate here
        #[arg(long)]
        certificate_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enclosure of lambda_1 of a surface map from deg_1(f^k) and deg_1(f^{2k})
    #[command(name = "surface-lambda1")]
    SurfaceLambda1 {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First degrees of the reductions modulo primes
    Modp {
        #[command(flatten)]
        map: MapArgs,
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomised consistency checks of the oracle, or re-verification of a certificate
    #[command(name = "validate-oracle")]
    ValidateOracle {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Certificate file to re-verify instead
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The non-uniform-growth counterexample sequence and its diagnostics
    Seqlab {
        #[arg(long, default_value_t = 5000)]
        n_max: u64,
        /// Flat windows are searched for every m up to this value
        #[arg(long, default_value_t = 5)]
        m: u64,
        /// Rows as CSV when the path ends in .csv, JSON otherwise
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratios deg_i(f^{m(n+1)}) / deg_i(f^{mn}) against a certified enclosure
    #[command(name = "uniform-growth")]
    UniformGrowth {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 8)]
        m: u64,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, default_value = "9/10")]
        delta: String,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact reference value of lambda_i for monomial maps
    Reference {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 20)]
        precision_bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Degrees { map, i, n_max, out } => commands::degrees(&map, i, n_max, out.as_deref()),
        Command::Lambda { map, i, solve, lower_bound_target, certificate_out, out } => commands::lambda(
            &map,
            i,
            &solve,
            lower_bound_target.as_deref(),
            certificate_out.as_deref(),
            out.as_deref(),
        ),
        Command::SurfaceLambda1 { map, solve, out } => commands::surface(&map, &solve, out.as_deref()),
        Command::Modp { map, primes, n_max, out } => modp::run(&map, &primes, n_max, out.as_deref()),
        Command::ValidateOracle { map, trials, seed, certificate, out } => {
            commands::validate(&map, trials, seed, certificate.as_deref(), out.as_deref())
        }
        Command::Seqlab { n_max, m, out } => commands::seqlab(n_max, m, out.as_deref()),
        Command::UniformGrowth { map, i, m, n_max, delta, solve, out } => {
            commands::uniform(&map, i, m, n_max, &delta, &solve, out.as_deref())
        }
        Command::Reference { map, i, precision_bits, out } => commands::reference(&map, i, precision_bits, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
