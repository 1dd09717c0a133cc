//! Timed sweeps over generated instances, one CSV row per solve.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use simconj::instances::generate;
use simconj::solve::{check_input, resolve, run};
use simconj::{Algorithm, InstanceKind, InstanceSpec, PermTuple, SolveOutcome};

use crate::error::CliError;

pub const CSV_HEADER: &str = "n,d,kind,algorithm,verdict,wall_time_ns,iterations,seed";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    /// Generators requested; the non-isomorphic kinds carry one more.
    pub d: usize,
    pub kind: String,
    pub algorithm: String,
    pub verdict: String,
    pub wall_time_ns: u64,
    pub iterations: usize,
    pub seed: u64,
}

/// Generator count for a sweep: fixed, or `ceil(log2 n)` per size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeRule {
    Fixed(usize),
    Log,
}

impl DegreeRule {
    pub fn for_size(self, n: usize) -> usize {
        match self {
            DegreeRule::Fixed(d) => d,
            DegreeRule::Log => ceil_log2(n).max(1),
        }
    }
}

impl FromStr for DegreeRule {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "log" {
            return Ok(DegreeRule::Log);
        }
        match s.parse::<usize>() {
            Ok(d) if d > 0 => Ok(DegreeRule::Fixed(d)),
            _ => Err(CliError::Usage(format!("--d expects a positive integer or \"log\", got {s:?}"))),
        }
    }
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub d: DegreeRule,
    pub kinds: Vec<InstanceKind>,
    pub algorithms: Vec<Algorithm>,
    pub repeats: usize,
    pub seed: u64,
}

pub fn verdict_name(isomorphic: bool) -> &'static str {
    if isomorphic {
        "iso"
    } else {
        "noniso"
    }
}

/// Runs one solve and times it with a monotonic clock. Input checks and
/// `auto` resolution happen before the clock starts. The reported time is at
/// least one nanosecond.
pub fn time_solve(alg: Algorithm, a: &PermTuple, b: &PermTuple) -> Result<(SolveOutcome, u64), CliError> {
    let alg = resolve(alg, a, b, None);
    check_input(alg, a, b)?;
    let start = Instant::now();
    let out = run(alg, a, b)?;
    let ns = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX).max(1);
    Ok((out, ns))
}

pub fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2
    }
}

/// Whether `alg` can run on instances of this kind and size at all.
fn applicable(alg: Algorithm, kind: InstanceKind, n: usize) -> bool {
    match alg {
        Algorithm::Ncycle => kind.is_ncycle(),
        Algorithm::Oracle => n <= simconj::baseline::ORACLE_MAX_N,
        _ => true,
    }
}

/// Runs the sweep, handing each row to `sink` as soon as it is measured.
/// Combinations that cannot run (the rotation test on instances without an
/// `n`-cycle, the oracle above its size limit) are skipped and returned.
pub fn run_sweep(
    config: &BenchConfig,
    mut sink: impl FnMut(BenchRow) -> Result<(), CliError>,
) -> Result<Vec<String>, CliError> {
    let mut skipped = Vec::new();
    for &n in &config.sizes {
        let d = config.d.for_size(n);
        for &kind in &config.kinds {
            for repeat in 0..config.repeats {
                let seed = config.seed.wrapping_add(repeat as u64);
                let inst = generate(&InstanceSpec::new(n, d, kind, seed))?;
                for &alg in &config.algorithms {
                    if !applicable(alg, kind, n) {
                        if repeat == 0 {
                            skipped.push(format!("{alg} on {kind} n={n}"));
                        }
                        continue;
                    }
                    let (out, ns) = time_solve(alg, &inst.a, &inst.b)?;
                    sink(BenchRow {
                        n,
                        d,
                        kind: kind.to_string(),
                        algorithm: alg.to_string(),
                        verdict: verdict_name(out.isomorphic).to_string(),
                        wall_time_ns: ns,
                        iterations: out.iterations,
                        seed,
                    })?;
                }
            }
        }
    }
    Ok(skipped)
}

/// Runs the sweep and writes CSV with the fixed header to `out`.
pub fn write_sweep_csv<W: Write>(config: &BenchConfig, out: W) -> Result<Vec<String>, CliError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    let skipped = run_sweep(config, |row| {
        writer.serialize(row)?;
        writer.flush()?;
        Ok(())
    })?;
    writer.flush()?;
    Ok(skipped)
}

pub fn read_rows<R: std::io::Read>(input: R) -> Result<Vec<BenchRow>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if headers != CSV_HEADER {
        return Err(CliError::Parse { line: 1, message: format!("unexpected CSV header {headers:?}") });
    }
    Ok(reader.deserialize().collect::<Result<Vec<BenchRow>, _>>()?)
}
