//! Snapshot dump format.
//!
//! ```text
//! # optional comments
//! <n> <r0> torus <side> | disk <radius> | rectangle <width> <height>
//! <x> <y>            (n lines)
//! ```
//!
//! Adjacency is recomputed on load. Floats are written in shortest
//! round-trip form, so a dump reloads to an identical snapshot.

use std::fmt::Write;

use super::{NetworkSnapshot, Point, Region};
use crate::text::{content_lines, field, finite, no_trailing};
use crate::{Error, Result};

pub fn write_snapshot(s: &NetworkSnapshot) -> String {
    let mut out = format!("{} {} {}\n", s.len(), s.range(), s.region());
    for p in s.positions() {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    out
}

fn parse_region<'a>(line: usize, mut tokens: impl Iterator<Item = &'a str>) -> Result<Region> {
    let kind = tokens
        .next()
        .ok_or_else(|| Error::parse(line, "missing region kind"))?;
    let mut dim = |what| -> Result<f64> {
        let v: f64 = field(line, tokens.next(), what)?;
        finite(line, v, what)
    };
    let region = match kind {
        "torus" => Region::torus(dim("torus side")?),
        "disk" => Region::disk(dim("disk radius")?),
        "rectangle" => {
            let w = dim("rectangle width")?;
            Region::rectangle(w, dim("rectangle height")?)
        }
        other => return Err(Error::parse(line, format!("unknown region {other:?}"))),
    }
    .map_err(|e| Error::parse(line, e.to_string()))?;
    no_trailing(line, tokens)?;
    Ok(region)
}

pub fn parse_snapshot(input: &str) -> Result<NetworkSnapshot> {
    let mut lines = content_lines(input);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(0, "missing header"))?;
    let mut tokens = header.split_whitespace();
    let n: usize = field(line, tokens.next(), "node count")?;
    let r0: f64 = field(line, tokens.next(), "range")?;
    let r0 = finite(line, r0, "range")?;
    let region = parse_region(line, tokens)?;

    let mut positions = Vec::with_capacity(n.min(1 << 16));
    for (line, text) in lines {
        if positions.len() == n {
            return Err(Error::parse(line, format!("more than {n} positions")));
        }
        let mut tokens = text.split_whitespace();
        let x: f64 = field(line, tokens.next(), "x")?;
        let y: f64 = field(line, tokens.next(), "y")?;
        no_trailing(line, tokens)?;
        positions.push(Point::new(finite(line, x, "x")?, finite(line, y, "y")?));
    }
    if positions.len() != n {
        return Err(Error::parse(
            line,
            format!("header declares {n} nodes, found {}", positions.len()),
        ));
    }
    NetworkSnapshot::from_positions(region, r0, positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::sample_topology;

    #[test]
    fn dump_reloads_bit_exact() {
        for region in [
            Region::torus(7.3).unwrap(),
            Region::disk(5.0).unwrap(),
            Region::rectangle(3.0, 9.5).unwrap(),
        ] {
            let s = sample_topology(40, region, 1.3, 11).unwrap();
            let back = parse_snapshot(&write_snapshot(&s)).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn rejects_bad_dumps() {
        assert!(parse_snapshot("").is_err());
        assert!(parse_snapshot("2 1 torus 5\n0 0\n").is_err());
        assert!(parse_snapshot("1 1 torus 5\n0 0\n1 1\n").is_err());
        assert!(parse_snapshot("1 1 sphere 5\n0 0\n").is_err());
        assert!(parse_snapshot("1 1 torus -5\n0 0\n").is_err());
        assert!(parse_snapshot("1 0 torus 5\n0 0\n").is_err());
        assert!(parse_snapshot("1 1 torus 5\n0 nan\n").is_err());
        assert!(parse_snapshot("1 1 rectangle 5\n0 0\n").is_err());
        assert!(parse_snapshot("# header next\n1 1 disk 2 # r=2\n0.5 0.5\n").is_ok());
    }
}
