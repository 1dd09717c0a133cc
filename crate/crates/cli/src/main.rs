use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use simconj::{Algorithm, InstanceKind, InstanceSpec};
use simconj_cli::bench::{BenchConfig, DegreeRule};
use simconj_cli::commands::{cmd_bench, cmd_counterexample, cmd_gen, cmd_solve, cmd_verify, EXIT_INPUT_ERROR};
use simconj_cli::CliError;

/// Simultaneous conjugacy of permutation tuples generating transitive groups.
#[derive(Parser)]
#[command(name = "simconj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether one tau conjugates the first tuple of a pair file onto the second.
    Solve {
        pair_file: PathBuf,
        /// auto, oracle, quadratic, plain, subquadratic, lambda or ncycle.
        #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
        algo: Algorithm,
        /// Largest fewest-cycles count for which auto picks lambda [default: floor(sqrt n)].
        #[arg(long)]
        lambda_threshold: Option<usize>,
    },
    /// Write a random pair file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// iso, noniso, iso-ncycle or noniso-ncycle.
        #[arg(long, value_parser = parse_kind)]
        kind: InstanceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Time solvers over generated instances and emit CSV.
    Bench {
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Generators per tuple: a number, or "log" for ceil(log2 n).
        #[arg(long, default_value = "3", value_parser = parse_degree)]
        d: DegreeRule,
        #[arg(long, value_delimiter = ',', default_value = "iso", value_parser = parse_kind)]
        kinds: Vec<InstanceKind>,
        #[arg(long, value_delimiter = ',', default_value = "quadratic,subquadratic", value_parser = parse_algorithm)]
        algos: Vec<Algorithm>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a witness: exit 0 iff b_k = tau^-1 a_k tau for every k.
    Verify { pair_file: PathBuf, witness_file: PathBuf },
    /// Show the tuple on which ArcLabeling gives a trivial partition.
    Counterexample {
        #[arg(long)]
        json: bool,
    },
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: simconj::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<InstanceKind, String> {
    s.parse().map_err(|e: simconj::Error| e.to_string())
}

fn parse_degree(s: &str) -> Result<DegreeRule, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Solve { pair_file, algo, lambda_threshold } => cmd_solve(&pair_file, algo, lambda_threshold, &mut out),
        Command::Gen { n, d, kind, seed, out: path } => cmd_gen(&InstanceSpec::new(n, d, kind, seed), path.as_deref(), &mut out),
        Command::Bench { sizes, d, kinds, algos, repeats, seed, csv } => {
            let config = BenchConfig { sizes, d, kinds, algorithms: algos, repeats, seed };
            cmd_bench(&config, csv.as_deref(), &mut out, &mut io::stderr())
        }
        Command::Verify { pair_file, witness_file } => cmd_verify(&pair_file, &witness_file, &mut out),
        Command::Counterexample { json } => cmd_counterexample(json, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
