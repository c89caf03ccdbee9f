//! Hop count versus Euclidean distance on random disk topologies.
//!
//! The study estimates `Pr{H = h | D in bin}` for connected node pairs by
//! Monte Carlo, flips it to `Pr{D in bin | H = h}` with a binned distance
//! density, and checks both families for stochastic monotonicity.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{monotone_scan, DiscreteDistribution, MonotonicityReport};
use crate::geo::{graph, sample_topology, NetworkSnapshot, Region};
use crate::seed;
use crate::{Error, Result};

/// Cells with fewer samples are flagged low-confidence.
pub const MIN_CELL_SAMPLES: u64 = 30;
pub const DEFAULT_BINS: usize = 40;
pub const DEFAULT_TOPOLOGIES: usize = 200;
pub const DEFAULT_PAIRS: usize = 500;

/// Distance bins `(edges[i], edges[i + 1]]`; a distance of exactly zero
/// falls into the first bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceBins {
    edges: Vec<f64>,
}

impl DistanceBins {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::arg("need at least two bin edges"));
        }
        if edges[0] != 0.0 {
            return Err(Error::arg(format!("first bin edge must be 0, got {}", edges[0])));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::arg("bin edges must be finite and strictly increasing"));
        }
        Ok(Self { edges })
    }

    /// `count` equal-width bins over `(0, max]`.
    pub fn uniform(max: f64, count: usize) -> Result<Self> {
        if !(max > 0.0 && max.is_finite()) || count == 0 {
            return Err(Error::arg(format!("invalid uniform bins: max {max}, count {count}")));
        }
        let mut edges: Vec<f64> = (0..=count).map(|i| max * i as f64 / count as f64).collect();
        edges[count] = max;
        Self::new(edges)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn upper(&self) -> f64 {
        *self.edges.last().expect("at least two edges")
    }

    pub fn bounds(&self, bin: usize) -> (f64, f64) {
        (self.edges[bin], self.edges[bin + 1])
    }

    pub fn index(&self, d: f64) -> Option<usize> {
        if !(d >= 0.0) || d > self.upper() {
            return None;
        }
        // First edge >= d closes the bin.
        let k = self.edges.partition_point(|&e| e < d);
        Some(k.saturating_sub(1).min(self.len() - 1))
    }

    fn check_covers(&self, max: f64) -> Result<()> {
        if self.upper() < max {
            return Err(Error::arg(format!(
                "bins end at {} but distances reach {max}",
                self.upper()
            )));
        }
        Ok(())
    }
}

/// Hop counts per distance bin for connected node pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopDistanceStudy {
    pub r0: f64,
    pub density: f64,
    pub radius: f64,
    pub nodes: usize,
    pub bins: DistanceBins,
    /// `counts[bin][h]`.
    pub counts: Vec<BTreeMap<u32, u64>>,
    /// Sampled pairs that turned out to be disconnected.
    pub discarded: u64,
}

impl HopDistanceStudy {
    pub fn bin_total(&self, bin: usize) -> u64 {
        self.counts[bin].values().sum()
    }

    pub fn total(&self) -> u64 {
        (0..self.bins.len()).map(|b| self.bin_total(b)).sum()
    }

    pub fn low_confidence(&self, bin: usize) -> bool {
        self.bin_total(bin) < MIN_CELL_SAMPLES
    }

    /// Samples per hop count over all bins.
    pub fn hop_totals(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for bin in &self.counts {
            for (&h, &c) in bin {
                *out.entry(h).or_insert(0) += c;
            }
        }
        out
    }

    /// `Pr{H = h | D in bin}` for every bin with samples.
    pub fn hop_given_distance(&self) -> Vec<(usize, DiscreteDistribution)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(bin, c)| {
                let d = DiscreteDistribution::from_weights(c.iter().map(|(&h, &n)| (i64::from(h), n as f64)))
                    .expect("nonempty counts");
                (bin, d)
            })
            .collect()
    }

    fn merge(&mut self, other: &HopDistanceStudy) {
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (&h, &c) in theirs {
                *mine.entry(h).or_insert(0) += c;
            }
        }
        self.discarded += other.discarded;
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("{name} must be positive, got {v}")))
    }
}

/// Uniform ordered pair of distinct nodes.
fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let u = rng.random_range(0..n);
    let mut v = rng.random_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

fn sample_trial(
    snapshot: &NetworkSnapshot,
    bins: &DistanceBins,
    pairs: usize,
    trial_seed: u64,
) -> (Vec<BTreeMap<u32, u64>>, u64) {
    let mut counts = vec![BTreeMap::new(); bins.len()];
    let mut discarded = 0;
    let n = snapshot.len();
    let mut rng = seed::rng(seed::derive(trial_seed, 1));
    let mut cache: HashMap<usize, Vec<Option<u32>>> = HashMap::new();
    let r0 = snapshot.range();
    for _ in 0..pairs {
        let (u, v) = random_pair(&mut rng, n);
        let hops = cache
            .entry(u)
            .or_insert_with(|| graph::bfs(snapshot.adjacency(), u))[v];
        let Some(h) = hops else {
            discarded += 1;
            continue;
        };
        let d = snapshot.distance(u, v);
        assert!(
            d <= f64::from(h) * r0 * (1.0 + 1e-12),
            "{h} hops cannot span distance {d} with range {r0}"
        );
        let bin = bins.index(d).expect("bins cover the disk diameter");
        *counts[bin].entry(h).or_insert(0) += 1;
    }
    (counts, discarded)
}

/// Monte Carlo study over `trials` disk topologies with
/// `n = round(density * pi * radius^2)` nodes and `pairs_per_trial` sampled
/// node pairs each. Disconnected pairs are discarded.
pub fn estimate_hop_given_distance(
    r0: f64,
    density: f64,
    radius: f64,
    bins: &DistanceBins,
    trials: usize,
    pairs_per_trial: usize,
    seed: u64,
) -> Result<HopDistanceStudy> {
    check_positive("r0", r0)?;
    check_positive("density", density)?;
    check_positive("radius", radius)?;
    bins.check_covers(2.0 * radius)?;
    let nodes = (density * std::f64::consts::PI * radius * radius).round() as usize;
    if nodes < 2 {
        return Err(Error::arg(format!("disk holds only {nodes} nodes")));
    }
    let region = Region::disk(radius)?;
    let empty = HopDistanceStudy {
        r0,
        density,
        radius,
        nodes,
        bins: bins.clone(),
        counts: vec![BTreeMap::new(); bins.len()],
        discarded: 0,
    };
    let parts: Vec<_> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial_seed = seed::derive(seed, i);
            let snapshot = sample_topology(nodes, region, r0, trial_seed).expect("validated");
            sample_trial(&snapshot, bins, pairs_per_trial, trial_seed)
        })
        .collect();
    let mut study = empty;
    for (counts, discarded) in parts {
        let part = HopDistanceStudy {
            counts,
            discarded,
            ..study.clone()
        };
        study.merge(&part);
    }
    Ok(study)
}

/// Binned law of the distance between two uniform points in a disk.
pub fn distance_density_disk(
    radius: f64,
    bins: &DistanceBins,
    samples: u64,
    seed: u64,
) -> Result<DiscreteDistribution> {
    check_positive("radius", radius)?;
    bins.check_covers(2.0 * radius)?;
    if samples == 0 {
        return Err(Error::arg("need at least one sample"));
    }
    let region = Region::disk(radius)?;
    const CHUNK: u64 = 1 << 16;
    let chunks = samples.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed::rng(seed::derive(seed, c));
            let mut counts = vec![0u64; bins.len()];
            let len = CHUNK.min(samples - c * CHUNK);
            for _ in 0..len {
                let a = region.sample_point(&mut rng);
                let b = region.sample_point(&mut rng);
                let bin = bins.index(region.distance(a, b)).expect("bins cover the disk");
                counts[bin] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    DiscreteDistribution::from_weights(counts.iter().enumerate().map(|(i, &c)| (i as i64, c as f64)))
}

/// `Pr{D in bin | H = h}` proportional to `Pr{H = h | bin} f_D(bin)`.
///
/// Returns the flipped family and the hop counts dropped because their
/// normalizer vanished.
pub fn bayes_flip(
    study: &HopDistanceStudy,
    f_d: &DiscreteDistribution,
) -> Result<(Vec<(u32, DiscreteDistribution)>, Vec<u32>)> {
    if f_d.min() < 0 || f_d.max() >= study.bins.len() as i64 {
        return Err(Error::arg(format!(
            "distance law must live on bin indices 0..{}",
            study.bins.len()
        )));
    }
    let given_d = study.hop_given_distance();
    let hops: Vec<u32> = study.hop_totals().into_keys().collect();
    let mut family = Vec::new();
    let mut omitted = Vec::new();
    for h in hops {
        let weights: Vec<(i64, f64)> = given_d
            .iter()
            .map(|(bin, law)| (*bin as i64, law.prob(i64::from(h)) * f_d.prob(*bin as i64)))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        match DiscreteDistribution::from_weights(weights) {
            Ok(d) => family.push((h, d)),
            Err(_) => omitted.push(h),
        }
    }
    Ok((family, omitted))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub passed: bool,
    pub hop_given_distance: MonotonicityReport<usize>,
    pub distance_given_hop: MonotonicityReport<u32>,
    pub low_confidence_bins: Vec<usize>,
    pub omitted_hops: Vec<u32>,
    pub samples: u64,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Three pooled binomial standard errors of a CDF difference.
fn pooled_tolerance(f0: f64, n0: u64, f1: f64, n1: u64) -> f64 {
    let (n0, n1) = (n0 as f64, n1 as f64);
    let pooled = (n0 * f0 + n1 * f1) / (n0 + n1);
    3.0 * (pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1)).sqrt()
}

/// Checks both estimated families for stochastic monotonicity, allowing
/// three pooled binomial standard errors at each CDF point.
pub fn verify_conjecture(study: &HopDistanceStudy, f_d: &DiscreteDistribution) -> Result<ConjectureReport> {
    let given_d = study.hop_given_distance();
    let bin_n: HashMap<usize, u64> = given_d.iter().map(|(b, _)| (*b, study.bin_total(*b))).collect();
    let laws: HashMap<usize, &DiscreteDistribution> = given_d.iter().map(|(b, d)| (*b, d)).collect();
    let entries: Vec<(usize, &DiscreteDistribution)> = given_d.iter().map(|(b, d)| (*b, d)).collect();
    let h_report = monotone_scan(&entries, |b0, b1, t| {
        pooled_tolerance(laws[&b0].cdf(t), bin_n[&b0], laws[&b1].cdf(t), bin_n[&b1])
    });

    let (flipped, omitted_hops) = bayes_flip(study, f_d)?;
    let hop_n = study.hop_totals();
    let flip_laws: HashMap<u32, &DiscreteDistribution> = flipped.iter().map(|(h, d)| (*h, d)).collect();
    let entries: Vec<(u32, &DiscreteDistribution)> = flipped.iter().map(|(h, d)| (*h, d)).collect();
    let d_report = monotone_scan(&entries, |h0, h1, t| {
        pooled_tolerance(flip_laws[&h0].cdf(t), hop_n[&h0], flip_laws[&h1].cdf(t), hop_n[&h1])
    });

    Ok(ConjectureReport {
        passed: h_report.monotone && d_report.monotone,
        hop_given_distance: h_report,
        distance_given_hop: d_report,
        low_confidence_bins: (0..study.bins.len()).filter(|&b| study.low_confidence(b)).collect(),
        omitted_hops,
        samples: study.total(),
    })
}

pub fn study_csv(study: &HopDistanceStudy) -> String {
    let mut out = String::from("d_bin_low,d_bin_high,h,count,prob\n");
    for (bin, counts) in study.counts.iter().enumerate() {
        let total = study.bin_total(bin) as f64;
        let (lo, hi) = study.bins.bounds(bin);
        for (&h, &c) in counts {
            writeln!(out, "{lo},{hi},{h},{c},{}", c as f64 / total).unwrap();
        }
    }
    out
}

/// Experimental: hop count of the detour from `u` to `v` after the first
/// link of a shortest `u`-`v` path (lowest-index next hop) goes down.
/// `None` if `u` and `v` are disconnected with or without that link.
pub fn alternate_route_hops(snapshot: &NetworkSnapshot, u: usize, v: usize) -> Result<Option<u32>> {
    let to_v = snapshot.hop_distances_from(v)?;
    if u >= snapshot.len() || u == v {
        return Err(Error::arg(format!("need two distinct nodes, got {u} and {v}")));
    }
    let Some(d) = to_v[u] else { return Ok(None) };
    let next = snapshot
        .neighbors(u)
        .iter()
        .map(|&x| x as usize)
        .filter(|&x| to_v[x] == Some(d - 1))
        .min()
        .expect("shortest path has a next hop");
    let mut adjacency = snapshot.adjacency().to_vec();
    adjacency[u].retain(|&x| x as usize != next);
    adjacency[next].retain(|&x| x as usize != u);
    Ok(graph::bfs_to(&adjacency, u, v))
}
