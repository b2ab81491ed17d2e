//! `mcen`: command-line front end for the census engine.
//!
//! Arguments may be read from files with `@path` (one argument per line).

mod commands;

use clap::{Parser, Subcommand};
use mcen_core::lab::Quantity;
use mcen_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "mcen", version, about = "Exact censuses of products of bounded integer matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Seed for fuzzed inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report wall_ms = 0 so that output is byte-reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,

    /// Override the census tuple guard (also MCEN_GUARD_MAX_TUPLES).
    #[arg(long, global = true)]
    pub max_tuples: Option<u128>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Product census of the box: distinct products and multiplicities.
    Census {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(short = 'm', long)]
        m: u32,
        /// Box filter: all, nonsingular, rank_eq:K, rank_le:K, det_eq:D.
        #[arg(long, default_value = "all")]
        variant: String,
        /// Also write the full count map in binary form.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Number of m-tuples of box matrices with product equal to the target.
    Solve {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(short = 'm', long)]
        m: u32,
        #[arg(long, default_value = "all")]
        variant: String,
        /// Target matrix as JSON, e.g. '[[1,0],[0,1]]'.
        #[arg(long)]
        target: String,
    },
    /// Number of 2m-tuples with A_1...A_m = B_1...B_m.
    Pairs {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(short = 'm', long)]
        m: u32,
        #[arg(long, default_value = "all")]
        variant: String,
    },
    /// Determinant distribution of the box (CSV).
    Detstats {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(long, default_value = "all")]
        variant: String,
    },
    /// Rank distribution of the box (CSV).
    Rankstats {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(long, default_value = "all")]
        variant: String,
    },
    /// Distinct m-fold products of integers in [-H, H].
    Scalartable {
        #[arg(short = 'H', long = "height")]
        h: u64,
        #[arg(short = 'm', long, default_value_t = 2)]
        m: u32,
    },
    /// Left-identity factor B of a matrix A (B A = A, rank B = rank A).
    Construct {
        /// `q` for the rationals or a prime p for F_p.
        #[arg(long, default_value = "q")]
        field: String,
        /// Matrix JSON file.
        #[arg(long = "in", conflicts_with = "fuzz", required_unless_present = "fuzz")]
        input: Option<PathBuf>,
        /// Check this many seeded random inputs instead.
        #[arg(long, requires = "n")]
        fuzz: Option<u64>,
        #[arg(short = 'n', long)]
        n: Option<usize>,
    },
    /// Write C = X Y with rank X <= k1 and rank Y <= k2.
    Decompose {
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Exhaustive rank-bounded product sets over F_q, with rank counts.
    Fieldcensus {
        #[arg(short = 'q', long)]
        q: u64,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long)]
        k3: Option<usize>,
        #[arg(long, requires = "k3")]
        k4: Option<usize>,
    },
    /// Count a quantity over an H grid and fit the log-log slope (CSV).
    Fit {
        /// One of box, det_zero, rank_k, T_m_nonsingular_C, T_m_singular_C_m2,
        /// T_m_singular_C_m3plus, T_m_zero_C, pairs_nonsingular, pairs_all_m2,
        /// pairs_all_m3plus, W_lower.
        #[arg(long, value_parser = |s: &str| s.parse::<Quantity>())]
        quantity: Quantity,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'm', long, default_value_t = 2)]
        m: u32,
        /// Rank for rank_k.
        #[arg(long)]
        k: Option<u32>,
        /// Target matrix JSON for the T_m_*_C quantities.
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated H values.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
        /// Also write gnuplot columns `H count` to this file.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_guard() => EXIT_GUARD,
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let args = match argfile::expand_args(argfile::parse_fromfile, argfile::PREFIX) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: reading argument file: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
