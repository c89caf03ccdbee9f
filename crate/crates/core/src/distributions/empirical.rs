use std::collections::BTreeMap;

use super::DiscreteDistribution;
use crate::{Error, Result};

/// Multiset of integer observations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<i64, u64>,
    count: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: impl IntoIterator<Item = i64>) -> Self {
        let mut e = Self::new();
        e.extend(samples);
        e
    }

    pub fn push(&mut self, value: i64) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.count += 1;
    }

    /// Merges another sample set into this one.
    pub fn absorb(&mut self, other: &EmpiricalDistribution) {
        for (&v, &c) in &other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    pub fn multiplicity(&self, value: i64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// Number of samples `<= t`.
    pub fn count_at_most(&self, t: i64) -> u64 {
        self.counts.range(..=t).map(|(_, &c)| c).sum()
    }

    /// Empirical CDF; zero for an empty sample.
    pub fn cdf(&self, t: i64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.count_at_most(t) as f64 / self.count as f64
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| {
            self.counts
                .iter()
                .map(|(&v, &c)| v as f64 * c as f64)
                .sum::<f64>()
                / self.count as f64
        })
    }

    /// Unbiased sample variance.
    pub fn sample_variance(&self) -> Option<f64> {
        let mean = self.mean()?;
        (self.count > 1).then(|| {
            self.counts
                .iter()
                .map(|(&v, &c)| {
                    let d = v as f64 - mean;
                    d * d * c as f64
                })
                .sum::<f64>()
                / (self.count - 1) as f64
        })
    }

    pub fn standard_error(&self) -> Option<f64> {
        self.sample_variance()
            .map(|v| (v / self.count as f64).sqrt())
    }

    pub fn to_distribution(&self) -> Result<DiscreteDistribution> {
        if self.count == 0 {
            return Err(Error::InvalidDistribution("empty sample".into()));
        }
        DiscreteDistribution::from_weights(self.counts.iter().map(|(&v, &c)| (v, c as f64)))
    }
}

impl Extend<i64> for EmpiricalDistribution {
    fn extend<I: IntoIterator<Item = i64>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}

/// Dvoretzky–Kiefer–Wolfowitz half-width: with probability at least
/// `1 - alpha`, the empirical CDF of `n` samples is uniformly within this
/// distance of the true CDF.
pub fn dkw_epsilon(n: u64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}
