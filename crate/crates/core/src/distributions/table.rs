//! Text tables for distributions and conditional families.
//!
//! A single distribution is written one atom per line as `value prob`; a
//! family as `h value prob`. Fields are whitespace-separated, `#` starts a
//! comment, and probabilities may be given as decimals or as `num/den`.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{ConditionalFamily, DiscreteDistribution};
use crate::text::{content_lines, field, finite, no_trailing};
use crate::{Error, Result};

pub(crate) fn parse_prob(line: usize, token: Option<&str>) -> Result<f64> {
    let token = token.ok_or_else(|| Error::parse(line, "missing probability"))?;
    let value = match token.split_once('/') {
        Some((num, den)) => {
            let num: f64 = field(line, Some(num), "numerator")?;
            let den: f64 = field(line, Some(den), "denominator")?;
            if den == 0.0 {
                return Err(Error::parse(line, "zero denominator"));
            }
            num / den
        }
        None => field(line, Some(token), "probability")?,
    };
    finite(line, value, "probability")
}

fn parse_atom<'a>(line: usize, mut tokens: impl Iterator<Item = &'a str>) -> Result<(i64, f64)> {
    let value: i64 = field(line, tokens.next(), "value")?;
    let prob = parse_prob(line, tokens.next())?;
    no_trailing(line, tokens)?;
    Ok((value, prob))
}

pub fn parse_distribution(input: &str) -> Result<DiscreteDistribution> {
    let mut atoms = Vec::new();
    for (line, text) in content_lines(input) {
        atoms.push(parse_atom(line, text.split_whitespace())?);
    }
    if atoms.is_empty() {
        return Err(Error::parse(0, "no atoms"));
    }
    DiscreteDistribution::new(atoms)
}

/// Parses `h value prob` lines from an iterator of numbered lines.
pub(crate) fn parse_family_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<ConditionalFamily> {
    let mut rows: BTreeMap<u32, Vec<(i64, f64)>> = BTreeMap::new();
    let mut last_line = 0;
    for (line, text) in lines {
        last_line = line;
        let mut tokens = text.split_whitespace();
        let h: u32 = field(line, tokens.next(), "condition value")?;
        let atom = parse_atom(line, tokens)?;
        rows.entry(h).or_default().push(atom);
    }
    let entries = rows
        .into_iter()
        .map(|(h, atoms)| {
            DiscreteDistribution::new(atoms)
                .map(|d| (h, d))
                .map_err(|e| Error::parse(last_line, format!("entry h={h}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ConditionalFamily::new(entries).map_err(|e| Error::parse(last_line, e.to_string()))
}

pub fn parse_family(input: &str) -> Result<ConditionalFamily> {
    parse_family_lines(content_lines(input))
}

pub fn write_distribution(d: &DiscreteDistribution) -> String {
    let mut out = String::from("# value prob\n");
    for (v, p) in d.atoms() {
        writeln!(out, "{v} {p}").unwrap();
    }
    out
}

pub fn write_family(f: &ConditionalFamily) -> String {
    let mut out = String::from("# h value prob\n");
    out.push_str(&family_rows(f));
    out
}

pub(crate) fn family_rows(f: &ConditionalFamily) -> String {
    let mut out = String::new();
    for (h, d) in f.iter() {
        for (v, p) in d.atoms() {
            writeln!(out, "{h} {v} {p}").unwrap();
        }
    }
    out
}
