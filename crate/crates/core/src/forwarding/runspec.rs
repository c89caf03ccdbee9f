//! Run specification files.
//!
//! ```text
//! # link-up probability and slot convention
//! p 0.5
//! preset bare            # tr-a | bare | detect
//! policy both            # source | intermediate | both
//! a1 5
//! runs 10000
//! seed 42
//! horizon 1000000
//! alt                    # rows "h value prob" until "end"
//! 1 1 1
//! 2 1 1/2
//! 2 2 1/2
//! end
//! wait                   # optional, same row format
//! 1 0 1
//! 2 1 1
//! end
//! ```
//!
//! `h_max` may be given and must then match the alternate-route table.

use std::fmt::Write;

use super::{ForwardingModel, Policy, SlotConvention, DEFAULT_HORIZON};
use crate::distributions::table::{family_rows, parse_family_lines};
use crate::distributions::ConditionalFamily;
use crate::text::{content_lines, field, no_trailing};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub model: ForwardingModel,
    /// `None` runs both policies.
    pub policy: Option<Policy>,
    pub a1: u32,
    pub runs: u64,
    pub seed: u64,
    pub horizon: u64,
}

impl RunSpec {
    pub fn policies(&self) -> Vec<Policy> {
        match self.policy {
            Some(p) => vec![p],
            None => Policy::BOTH.to_vec(),
        }
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.replace(value).is_some() {
        return Err(Error::parse(line, format!("duplicate key {key:?}")));
    }
    Ok(())
}

pub fn parse_run_spec(input: &str) -> Result<RunSpec> {
    let mut p = None;
    let mut h_max: Option<u32> = None;
    let mut convention = None;
    let mut policy: Option<Option<Policy>> = None;
    let mut a1 = None;
    let mut runs = None;
    let mut seed = None;
    let mut horizon = None;
    let mut alt: Option<ConditionalFamily> = None;
    let mut wait: Option<ConditionalFamily> = None;

    let mut lines = content_lines(input);
    let mut last_line = 0;
    while let Some((line, text)) = lines.next() {
        last_line = line;
        let mut tokens = text.split_whitespace();
        let key = tokens.next().expect("content lines are non-empty");
        match key {
            "alt" | "wait" => {
                no_trailing(line, tokens)?;
                let mut rows = Vec::new();
                let mut closed = false;
                for (l, t) in lines.by_ref() {
                    last_line = l;
                    if t == "end" {
                        closed = true;
                        break;
                    }
                    rows.push((l, t));
                }
                if !closed {
                    return Err(Error::parse(line, format!("table {key:?} missing \"end\"")));
                }
                let family = parse_family_lines(rows.into_iter())?;
                let slot = if key == "alt" { &mut alt } else { &mut wait };
                set_once(slot, family, line, key)?;
                continue;
            }
            "p" => set_once(&mut p, field::<f64>(line, tokens.next(), "p")?, line, key)?,
            "h_max" => set_once(&mut h_max, field(line, tokens.next(), "h_max")?, line, key)?,
            "preset" => {
                let name: String = field(line, tokens.next(), "preset")?;
                let c = name
                    .parse::<SlotConvention>()
                    .map_err(|e| Error::parse(line, e.to_string()))?;
                set_once(&mut convention, c, line, key)?;
            }
            "policy" => {
                let name: String = field(line, tokens.next(), "policy")?;
                let pol = match name.as_str() {
                    "both" => None,
                    other => Some(
                        other
                            .parse::<Policy>()
                            .map_err(|e| Error::parse(line, e.to_string()))?,
                    ),
                };
                set_once(&mut policy, pol, line, key)?;
            }
            "a1" => set_once(&mut a1, field(line, tokens.next(), "a1")?, line, key)?,
            "runs" => set_once(&mut runs, field(line, tokens.next(), "runs")?, line, key)?,
            "seed" => set_once(&mut seed, field(line, tokens.next(), "seed")?, line, key)?,
            "horizon" => set_once(&mut horizon, field(line, tokens.next(), "horizon")?, line, key)?,
            other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
        }
        no_trailing(line, tokens)?;
    }

    let missing = |what: &str| Error::parse(last_line, format!("missing {what}"));
    let alt = alt.ok_or_else(|| missing("alt table"))?;
    if let Some(h) = h_max {
        if h != alt.h_max() {
            return Err(Error::parse(
                last_line,
                format!("h_max {h} does not match alt table (1..={})", alt.h_max()),
            ));
        }
    }
    let model = ForwardingModel::new(
        p.ok_or_else(|| missing("p"))?,
        alt,
        wait,
        convention.unwrap_or(SlotConvention::BARE),
    )
    .map_err(|e| Error::parse(last_line, e.to_string()))?;
    let a1 = a1.ok_or_else(|| missing("a1"))?;
    model
        .check_start(a1)
        .map_err(|e| Error::parse(last_line, e.to_string()))?;
    let runs = runs.unwrap_or(10_000);
    let horizon = horizon.unwrap_or(DEFAULT_HORIZON);
    if runs == 0 || horizon == 0 {
        return Err(Error::parse(last_line, "runs and horizon must be positive"));
    }
    Ok(RunSpec {
        model,
        policy: policy.unwrap_or(None),
        a1,
        runs,
        seed: seed.unwrap_or(0),
        horizon,
    })
}

pub fn write_run_spec(spec: &RunSpec) -> String {
    let m = &spec.model;
    let mut out = String::new();
    writeln!(out, "p {}", m.p()).unwrap();
    writeln!(out, "h_max {}", m.h_max()).unwrap();
    match m.convention().preset_name() {
        Some(name) => writeln!(out, "preset {name}").unwrap(),
        None => writeln!(out, "# custom convention {} not expressible as a preset", m.convention()).unwrap(),
    }
    let policy = spec.policy.map_or("both".to_string(), |p| p.to_string());
    writeln!(out, "policy {policy}").unwrap();
    writeln!(out, "a1 {}", spec.a1).unwrap();
    writeln!(out, "runs {}", spec.runs).unwrap();
    writeln!(out, "seed {}", spec.seed).unwrap();
    writeln!(out, "horizon {}", spec.horizon).unwrap();
    writeln!(out, "alt").unwrap();
    out.push_str(&family_rows(m.alt()));
    writeln!(out, "end").unwrap();
    if let Some(w) = m.wait() {
        writeln!(out, "wait").unwrap();
        out.push_str(&family_rows(w));
        writeln!(out, "end").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = "\
# monotone family with waits
p 0.5
h_max 3
preset detect
policy both
a1 3
runs 500
seed 9
alt
1 1 1
2 1 1/2
2 2 1/2
3 2 0.5
3 3 0.5
end
wait
1 0 1
2 1 1
3 2 1
end
";

    #[test]
    fn parses_full_spec() {
        let s = parse_run_spec(SPEC).unwrap();
        assert_eq!(s.model.convention(), SlotConvention::DETECT);
        assert_eq!(s.model.h_max(), 3);
        assert_eq!(s.policy, None);
        assert_eq!(s.policies().len(), 2);
        assert_eq!((s.a1, s.runs, s.seed, s.horizon), (3, 500, 9, DEFAULT_HORIZON));
        assert_eq!(s.model.wait_given(3).unwrap().min(), 2);
        assert_eq!(parse_run_spec(&write_run_spec(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_broken_specs() {
        assert!(parse_run_spec("").is_err());
        assert!(parse_run_spec(&SPEC.replace("p 0.5", "p 0")).is_err());
        assert!(parse_run_spec(&SPEC.replace("h_max 3", "h_max 4")).is_err());
        assert!(parse_run_spec(&SPEC.replace("a1 3", "a1 4")).is_err());
        assert!(parse_run_spec(&SPEC.replace("preset detect", "preset warp")).is_err());
        assert!(parse_run_spec(&SPEC.replace("seed 9", "seed 9\nseed 10")).is_err());
        assert!(parse_run_spec(&SPEC.replace("runs 500", "runs 0")).is_err());
        assert!(parse_run_spec(&SPEC.replace("3 3 0.5\nend", "3 3 0.5")).is_err());
        assert!(parse_run_spec(&SPEC.replace("policy both", "policy flood")).is_err());
        assert!(parse_run_spec(&SPEC.replace("a1 3", "a1 3 extra")).is_err());
        assert!(parse_run_spec(&SPEC.replace("alt\n", "alt x\n")).is_err());
    }
}
