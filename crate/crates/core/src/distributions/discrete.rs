use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// Tolerance on the total mass accepted at construction.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Probability mass function with finite integer support.
///
/// Atoms are kept sorted by value, with no duplicates and strictly positive
/// mass. The total mass is renormalised to one after validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    atoms: Vec<(i64, f64)>,
}

impl DiscreteDistribution {
    /// Builds a distribution from `(value, prob)` atoms.
    ///
    /// Duplicate values are merged and zero-mass atoms dropped. The masses
    /// must be finite, nonnegative and sum to one within [`SUM_TOLERANCE`].
    /// Sums off by rounding only are kept as given, so written tables
    /// reload bit for bit.
    pub fn new(atoms: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let merged = merge(atoms)?;
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        let scale = if (total - 1.0).abs() <= 1e-14 { 1.0 } else { total };
        Ok(Self::normalised(merged, scale))
    }

    /// Builds a distribution from nonnegative weights, normalising by their sum.
    pub fn from_weights(weights: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let merged = merge(weights)?;
        let total: f64 = merged.values().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(
                "weights have no positive mass".into(),
            ));
        }
        Ok(Self::normalised(merged, total))
    }

    pub fn point_mass(value: i64) -> Self {
        Self {
            atoms: vec![(value, 1.0)],
        }
    }

    /// Uniform law on the integers `lo..=hi`.
    pub fn uniform(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::arg(format!("empty uniform range {lo}..={hi}")));
        }
        let n = (hi - lo + 1) as f64;
        Ok(Self {
            atoms: (lo..=hi).map(|v| (v, 1.0 / n)).collect(),
        })
    }

    fn normalised(merged: BTreeMap<i64, f64>, total: f64) -> Self {
        Self {
            atoms: merged
                .into_iter()
                .filter(|&(_, p)| p > 0.0)
                .map(|(v, p)| (v, p / total))
                .collect(),
        }
    }

    pub fn atoms(&self) -> &[(i64, f64)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.atoms.iter().map(|&(v, _)| v)
    }

    pub fn min(&self) -> i64 {
        self.atoms[0].0
    }

    pub fn max(&self) -> i64 {
        self.atoms[self.atoms.len() - 1].0
    }

    pub fn prob(&self, value: i64) -> f64 {
        self.atoms
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|i| self.atoms[i].1)
            .unwrap_or(0.0)
    }

    /// `Pr{X <= t}`.
    pub fn cdf(&self, t: i64) -> f64 {
        if t < self.min() {
            return 0.0;
        }
        if t >= self.max() {
            return 1.0;
        }
        self.atoms
            .iter()
            .take_while(|&&(v, _)| v <= t)
            .map(|&(_, p)| p)
            .sum()
    }

    pub fn expectation(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.expectation();
        self.atoms
            .iter()
            .map(|&(v, p)| {
                let d = v as f64 - mean;
                d * d * p
            })
            .sum()
    }

    /// Smallest value whose cumulative mass exceeds `u`, for `u` in `[0, 1)`.
    ///
    /// Feeding a common uniform to two laws through this map gives the
    /// monotone (quantile) coupling.
    pub fn quantile(&self, u: f64) -> i64 {
        let mut acc = 0.0;
        for &(v, p) in &self.atoms {
            acc += p;
            if u < acc {
                return v;
            }
        }
        self.max()
    }

    /// Applies `f` to every value, merging atoms that collide.
    pub fn map_values(&self, f: impl Fn(i64) -> i64) -> Self {
        let merged = merge(self.atoms.iter().map(|&(v, p)| (f(v), p)))
            .expect("masses already validated");
        Self::normalised(merged, 1.0)
    }
}

fn merge(atoms: impl IntoIterator<Item = (i64, f64)>) -> Result<BTreeMap<i64, f64>> {
    let mut merged = BTreeMap::new();
    for (value, prob) in atoms {
        if !prob.is_finite() || prob < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "mass {prob} at value {value} is not a probability"
            )));
        }
        *merged.entry(value).or_insert(0.0) += prob;
    }
    if merged.values().all(|&p| p == 0.0) {
        return Err(Error::InvalidDistribution("no positive mass".into()));
    }
    Ok(merged)
}

impl fmt::Display for DiscreteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, p)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: {p}")?;
        }
        write!(f, "}}")
    }
}
