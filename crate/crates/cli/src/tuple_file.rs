//! Plain-text tuples: a header line `n d`, then `d` lines of 1-based images.
//! A pair file holds two such blocks separated by one blank line.

use std::fmt::Write as _;

use simconj::{PermTuple, Permutation};

use crate::error::CliError;

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

/// Parses one line of `n` 1-based images into a permutation.
fn parse_images(text: &str, n: usize, line: usize) -> Result<Permutation, CliError> {
    let mut images = Vec::with_capacity(n);
    for tok in text.split_whitespace() {
        let v: usize = tok.parse().map_err(|_| parse_error(line, format!("{tok:?} is not a positive integer")))?;
        if v == 0 || v > n {
            return Err(parse_error(line, format!("image {v} is outside 1..={n}")));
        }
        images.push(v - 1);
    }
    if images.len() != n {
        return Err(parse_error(line, format!("expected {n} images, found {}", images.len())));
    }
    Permutation::new(images).map_err(|e| parse_error(line, e.to_string()))
}

fn parse_header(text: &str, line: usize) -> Result<(usize, usize), CliError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let [n, d] = fields.as_slice() else {
        return Err(parse_error(line, format!("expected header \"n d\", found {text:?}")));
    };
    let n: usize = n.parse().map_err(|_| parse_error(line, format!("bad degree {n:?}")))?;
    let d: usize = d.parse().map_err(|_| parse_error(line, format!("bad generator count {d:?}")))?;
    if n == 0 || d == 0 {
        return Err(parse_error(line, "n and d must be positive"));
    }
    Ok((n, d))
}

/// Reads one block starting at `lines[start]`; returns the tuple and the index
/// of the first unread line. Line numbers in errors are 1-based.
fn parse_block(lines: &[&str], start: usize) -> Result<(PermTuple, usize), CliError> {
    let header = lines.get(start).ok_or_else(|| parse_error(start + 1, "missing header"))?;
    let (n, d) = parse_header(header, start + 1)?;
    let mut perms = Vec::with_capacity(d);
    for k in 0..d {
        let idx = start + 1 + k;
        let text = lines
            .get(idx)
            .filter(|l| !l.trim().is_empty())
            .ok_or_else(|| parse_error(idx + 1, format!("expected generator {} of {d}", k + 1)))?;
        perms.push(parse_images(text, n, idx + 1)?);
    }
    let t = PermTuple::new(perms).map_err(|e| parse_error(start + 1, e.to_string()))?;
    Ok((t, start + 1 + d))
}

fn ensure_blank_tail(lines: &[&str], from: usize) -> Result<(), CliError> {
    match lines.iter().enumerate().skip(from).find(|(_, l)| !l.trim().is_empty()) {
        Some((i, _)) => Err(parse_error(i + 1, "unexpected trailing content")),
        None => Ok(()),
    }
}

pub fn parse_tuple(text: &str) -> Result<PermTuple, CliError> {
    let lines: Vec<&str> = text.lines().collect();
    let (t, next) = parse_block(&lines, 0)?;
    ensure_blank_tail(&lines, next)?;
    Ok(t)
}

pub fn parse_pair(text: &str) -> Result<(PermTuple, PermTuple), CliError> {
    let lines: Vec<&str> = text.lines().collect();
    let (a, next) = parse_block(&lines, 0)?;
    match lines.get(next) {
        Some(l) if l.trim().is_empty() => {}
        Some(_) => return Err(parse_error(next + 1, "expected a blank line between the two tuples")),
        None => return Err(parse_error(next + 1, "missing second tuple")),
    }
    let (b, end) = parse_block(&lines, next + 1)?;
    ensure_blank_tail(&lines, end)?;
    Ok((a, b))
}

/// A single line of `n` 1-based images.
pub fn parse_witness(text: &str) -> Result<Permutation, CliError> {
    let lines: Vec<&str> = text.lines().collect();
    let Some(idx) = lines.iter().position(|l| !l.trim().is_empty()) else {
        return Err(parse_error(1, "empty witness"));
    };
    let n = lines[idx].split_whitespace().count();
    let p = parse_images(lines[idx], n, idx + 1)?;
    ensure_blank_tail(&lines, idx + 1)?;
    Ok(p)
}

pub fn format_permutation(p: &Permutation) -> String {
    let mut s = String::new();
    for (i, &v) in p.images().iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{}", v + 1).expect("writing to a String");
    }
    s
}

pub fn format_tuple(t: &PermTuple) -> String {
    let mut s = format!("{} {}\n", t.n(), t.d());
    for p in t.perms() {
        s.push_str(&format_permutation(p));
        s.push('\n');
    }
    s
}

pub fn format_pair(a: &PermTuple, b: &PermTuple) -> String {
    format!("{}\n{}", format_tuple(a), format_tuple(b))
}
