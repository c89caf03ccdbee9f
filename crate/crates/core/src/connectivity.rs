//! Monte Carlo estimators of connectivity probability `C`, reachability `R`
//! and mean shortest path `P` over random geometric graphs on a torus.
//!
//! Trial `i` of a sweep uses seed `derive(master, i)` at every grid point,
//! so the node layouts differ across degrees only by the scaling of the
//! torus. Estimates therefore do not depend on thread count or trial order.

use std::fmt::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::geo::{area_for_degree, sample_topology, NetworkSnapshot, Region};
use crate::seed;
use crate::{Error, Result};

/// Default trials per grid point.
pub const DEFAULT_TRIALS: usize = 1_000;

/// Sample mean with its plug-in standard error `sqrt(var / m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub samples: usize,
}

impl Estimate {
    fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
        Some(Self {
            mean,
            se: (var / m).sqrt(),
            samples: values.len(),
        })
    }

    fn binomial(successes: usize, trials: usize) -> Self {
        let c = successes as f64 / trials as f64;
        Self {
            mean: c,
            se: (c * (1.0 - c) / trials as f64).sqrt(),
            samples: trials,
        }
    }
}

/// Fraction of unordered node pairs lying in the same component.
pub fn reachability(s: &NetworkSnapshot) -> Result<f64> {
    let n = s.len();
    if n < 2 {
        return Err(Error::arg(format!("reachability needs at least 2 nodes, got {n}")));
    }
    let linked: usize = s
        .connected_components()
        .iter()
        .map(|c| c.len() * (c.len() - 1) / 2)
        .sum();
    Ok(linked as f64 / (n * (n - 1) / 2) as f64)
}

/// Mean hop count over connected pairs `u < v`; `None` if no pair is connected.
pub fn mean_shortest_path(s: &NetworkSnapshot) -> Option<f64> {
    let mut total = 0u64;
    let mut pairs = 0u64;
    for u in 0..s.len() {
        if s.degree(u) == 0 {
            continue;
        }
        let dist = s.hop_distances_from(u).expect("index in range");
        for d in dist[u + 1..].iter().flatten() {
            total += u64::from(*d);
            pairs += 1;
        }
    }
    (pairs > 0).then(|| total as f64 / pairs as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TrialOutcome {
    connected: bool,
    reachability: f64,
    mean_path: Option<f64>,
}

fn torus_for_degree(n: usize, r0: f64, d: f64) -> Result<Region> {
    Region::torus_with_area(area_for_degree(n, r0, d)?)
}

fn run_trial(n: usize, region: Region, r0: f64, trial_seed: u64, with_paths: bool) -> TrialOutcome {
    let s = sample_topology(n, region, r0, trial_seed).expect("validated parameters");
    let reach = reachability(&s).expect("n >= 2");
    TrialOutcome {
        connected: reach == 1.0,
        reachability: reach,
        mean_path: if with_paths { mean_shortest_path(&s) } else { None },
    }
}

fn check_trials(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::arg("need at least one trial"));
    }
    Ok(())
}

/// Fraction of `m` torus snapshots (sized for expected degree `d`) that form
/// a single component, with binomial standard error.
pub fn connectivity_probability(n: usize, r0: f64, d: f64, m: usize, seed: u64) -> Result<Estimate> {
    check_trials(m)?;
    let region = torus_for_degree(n, r0, d)?;
    let connected = (0..m as u64)
        .into_par_iter()
        .filter(|&i| run_trial(n, region, r0, seed::derive(seed, i), false).connected)
        .count();
    Ok(Estimate::binomial(connected, m))
}

/// Estimates at one grid point of a degree sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub degree: f64,
    pub connectivity: Estimate,
    pub reachability: Estimate,
    /// Averaged over snapshots with at least one connected pair, each
    /// snapshot weighted equally; `None` if no snapshot had one.
    pub mean_path: Option<Estimate>,
    pub trials: usize,
}

/// Estimates `C`, `R` and `P` at each expected degree of `degree_grid`.
pub fn phase_sweep(
    n: usize,
    r0: f64,
    degree_grid: &[f64],
    m: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    check_trials(m)?;
    if degree_grid.is_empty() {
        return Err(Error::arg("degree grid is empty"));
    }
    degree_grid
        .iter()
        .map(|&d| {
            let region = torus_for_degree(n, r0, d)?;
            let outcomes: Vec<TrialOutcome> = (0..m as u64)
                .into_par_iter()
                .map(|i| run_trial(n, region, r0, seed::derive(seed, i), true))
                .collect();
            let connected = outcomes.iter().filter(|o| o.connected).count();
            let reach: Vec<f64> = outcomes.iter().map(|o| o.reachability).collect();
            let paths: Vec<f64> = outcomes.iter().filter_map(|o| o.mean_path).collect();
            Ok(SweepPoint {
                degree: d,
                connectivity: Estimate::binomial(connected, m),
                reachability: Estimate::from_values(&reach).expect("m >= 1"),
                mean_path: Estimate::from_values(&paths),
                trials: m,
            })
        })
        .collect()
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("d,C,C_se,R,R_se,P,P_se,m\n");
    for p in points {
        let (pm, pse) = match p.mean_path {
            Some(e) => (e.mean.to_string(), e.se.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.degree,
            p.connectivity.mean,
            p.connectivity.se,
            p.reachability.mean,
            p.reachability.se,
            pm,
            pse,
            p.trials
        )
        .unwrap();
    }
    out
}

/// Position on the connectivity continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Connected almost surely.
    Area1,
    /// Connected only part of the time.
    Area2,
    /// Always partitioned, but nodes reach a sizable fraction of peers.
    Area3,
    /// Essentially isolated nodes.
    Area4,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Regime::Area1 => "area1",
            Regime::Area2 => "area2",
            Regime::Area3 => "area3",
            Regime::Area4 => "area4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeThresholds {
    pub c_low: f64,
    pub c_high: f64,
    pub r_min: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            c_low: 0.05,
            c_high: 0.95,
            r_min: 0.2,
        }
    }
}

pub fn classify_regime(c: f64, r: f64, th: RegimeThresholds) -> Regime {
    if c >= th.c_high {
        Regime::Area1
    } else if c > th.c_low {
        Regime::Area2
    } else if r >= th.r_min {
        Regime::Area3
    } else {
        Regime::Area4
    }
}
