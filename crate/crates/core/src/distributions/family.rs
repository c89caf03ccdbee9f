use std::collections::BTreeMap;

use super::DiscreteDistribution;
use crate::{Error, Result};

/// Conditional laws `X | H = h` for `h = 1..=h_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalFamily {
    entries: Vec<DiscreteDistribution>,
}

impl ConditionalFamily {
    /// Entries must cover the contiguous range `1..=h_max` exactly once.
    pub fn new(entries: impl IntoIterator<Item = (u32, DiscreteDistribution)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (h, d) in entries {
            if map.insert(h, d).is_some() {
                return Err(Error::arg(format!("duplicate condition value {h}")));
            }
        }
        if map.is_empty() {
            return Err(Error::arg("conditional family is empty"));
        }
        for (expected, &h) in (1u32..).zip(map.keys()) {
            if h != expected {
                return Err(Error::arg(format!(
                    "condition values must be 1..=h_max; found {h} where {expected} was expected"
                )));
            }
        }
        Ok(Self {
            entries: map.into_values().collect(),
        })
    }

    /// Family built from a function of the condition value.
    pub fn from_fn(
        h_max: u32,
        mut f: impl FnMut(u32) -> Result<DiscreteDistribution>,
    ) -> Result<Self> {
        Self::new((1..=h_max).map(|h| f(h).map(|d| (h, d))).collect::<Result<Vec<_>>>()?)
    }

    /// `X | H = h` is a point mass at `values[h - 1]`.
    pub fn deterministic(values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32 + 1, DiscreteDistribution::point_mass(v))),
        )
    }

    pub fn h_max(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn get(&self, h: u32) -> Option<&DiscreteDistribution> {
        h.checked_sub(1).and_then(|i| self.entries.get(i as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &DiscreteDistribution)> {
        (1u32..).zip(self.entries.iter())
    }
}
