//! Subcommand bodies. Each returns the process exit code on success; errors
//! map to [`EXIT_INPUT_ERROR`] in `main`.

use std::fs;
use std::io::Write;
use std::path::Path;

use simconj::baseline::demonstrate_counterexample;
use simconj::digraph::verify_conjugator;
use simconj::instances::generate;
use simconj::solve::{check_input, resolve, run};
use simconj::{Algorithm, InstanceSpec, Sign, Word};

use crate::bench::{write_sweep_csv, BenchConfig};
use crate::error::CliError;
use crate::tuple_file::{format_pair, format_permutation, parse_pair, parse_witness};

pub const EXIT_ISOMORPHIC: u8 = 0;
pub const EXIT_NOT_ISOMORPHIC: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// A word as space-separated letters with 1-based colors, e.g. `1+ 2-`.
pub fn format_word(word: &Word) -> String {
    if word.is_empty() {
        return "(empty)".into();
    }
    let letters: Vec<String> = word
        .letters()
        .iter()
        .map(|l| format!("{}{}", l.color + 1, if l.sign == Sign::Plus { '+' } else { '-' }))
        .collect();
    letters.join(" ")
}

pub fn cmd_solve(
    pair_file: &Path,
    algorithm: Algorithm,
    lambda_threshold: Option<usize>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let (a, b) = parse_pair(&read_file(pair_file)?)?;
    let alg = resolve(algorithm, &a, &b, lambda_threshold);
    check_input(alg, &a, &b).map_err(|e| match e {
        simconj::Error::NotTransitive => CliError::Usage(format!(
            "{alg} needs both tuples to generate transitive groups; use --algo oracle for small intransitive inputs"
        )),
        simconj::Error::NotAnNCycle { .. } => {
            CliError::Usage("ncycle needs a color that is an n-cycle in both tuples".into())
        }
        other => other.into(),
    })?;
    let outcome = run(alg, &a, &b)?;
    writeln!(out, "algorithm: {alg}")?;
    writeln!(out, "iterations: {}", outcome.iterations)?;
    if let Some(tau) = &outcome.witness {
        writeln!(out, "verdict: isomorphic")?;
        writeln!(out, "witness: {}", format_permutation(tau))?;
        Ok(EXIT_ISOMORPHIC)
    } else {
        writeln!(out, "verdict: not isomorphic")?;
        match &outcome.certificate {
            Some(w) => writeln!(out, "certificate: {}", format_word(w))?,
            None => writeln!(out, "certificate: none")?,
        }
        Ok(EXIT_NOT_ISOMORPHIC)
    }
}

/// Writes the generated pair to `out_path`, or to `out` when absent.
pub fn cmd_gen(spec: &InstanceSpec, out_path: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    let inst = generate(spec)?;
    let text = format_pair(&inst.a, &inst.b);
    match out_path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

pub fn cmd_bench(
    config: &BenchConfig,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let skipped = match csv_path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| CliError::io(p, e))?;
            write_sweep_csv(config, file)?
        }
        None => write_sweep_csv(config, &mut *out)?,
    };
    for s in skipped {
        writeln!(err, "skipped: {s}")?;
    }
    Ok(0)
}

pub fn cmd_verify(pair_file: &Path, witness_file: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let (a, b) = parse_pair(&read_file(pair_file)?)?;
    a.check_same_shape(&b)?;
    let tau = parse_witness(&read_file(witness_file)?)?;
    if tau.degree() != a.n() {
        return Err(simconj::Error::SizeMismatch { left: a.n(), right: tau.degree() }.into());
    }
    if verify_conjugator(&a, &b, &tau) {
        writeln!(out, "valid: b_k = tau^-1 a_k tau for all {} generators", a.d())?;
        Ok(0)
    } else {
        let bad: Vec<String> = (0..a.d())
            .filter(|&k| a.perm(k).conjugate_by(&tau).ok().as_ref() != Some(b.perm(k)))
            .map(|k| (k + 1).to_string())
            .collect();
        writeln!(out, "invalid: fails for generator(s) {}", bad.join(", "))?;
        Ok(1)
    }
}

pub fn cmd_counterexample(json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = demonstrate_counterexample()?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.discrepancy { 0 } else { 1 })
}
