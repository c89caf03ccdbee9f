//! Shared helpers for the whitespace-separated text formats.

use std::str::FromStr;

use crate::{Error, Result};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn field<T: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("cannot parse {what} from {token:?}")))
}

pub(crate) fn finite(line: usize, value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::parse(line, format!("{what} must be finite")))
    }
}

pub(crate) fn no_trailing<'a>(line: usize, mut rest: impl Iterator<Item = &'a str>) -> Result<()> {
    match rest.next() {
        Some(tok) => Err(Error::parse(line, format!("unexpected trailing token {tok:?}"))),
        None => Ok(()),
    }
}
