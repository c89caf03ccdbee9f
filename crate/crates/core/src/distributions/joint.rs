use std::collections::BTreeMap;

use super::{ConditionalFamily, DiscreteDistribution, SUM_TOLERANCE};
use crate::{Error, Result};

/// Joint law of two integer random variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    atoms: Vec<(i64, i64, f64)>,
}

impl JointDistribution {
    pub fn new(atoms: impl IntoIterator<Item = (i64, i64, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<(i64, i64), f64> = BTreeMap::new();
        for (x, y, p) in atoms {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "mass {p} at ({x}, {y}) is not a probability"
                )));
            }
            *merged.entry((x, y)).or_insert(0.0) += p;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "joint masses sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            atoms: merged
                .into_iter()
                .filter(|&(_, p)| p > 0.0)
                .map(|((x, y), p)| (x, y, p / total))
                .collect(),
        })
    }

    /// Joint of `X ~ marginal` and `Y | X = x ~ family[x]`.
    pub fn from_conditional(
        marginal: &DiscreteDistribution,
        family: &ConditionalFamily,
    ) -> Result<Self> {
        let mut atoms = Vec::new();
        for &(x, px) in marginal.atoms() {
            let cond = u32::try_from(x)
                .ok()
                .and_then(|h| family.get(h))
                .ok_or_else(|| Error::arg(format!("family has no entry for {x}")))?;
            atoms.extend(cond.atoms().iter().map(|&(y, py)| (x, y, px * py)));
        }
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[(i64, i64, f64)] {
        &self.atoms
    }

    pub fn marginal_x(&self) -> DiscreteDistribution {
        DiscreteDistribution::from_weights(self.atoms.iter().map(|&(x, _, p)| (x, p)))
            .expect("joint has positive mass")
    }

    pub fn marginal_y(&self) -> DiscreteDistribution {
        DiscreteDistribution::from_weights(self.atoms.iter().map(|&(_, y, p)| (y, p)))
            .expect("joint has positive mass")
    }

    pub fn covariance(&self) -> f64 {
        let mx = self.marginal_x().expectation();
        let my = self.marginal_y().expectation();
        self.atoms
            .iter()
            .map(|&(x, y, p)| (x as f64 - mx) * (y as f64 - my) * p)
            .sum()
    }

    /// Pearson correlation coefficient of the exact joint.
    pub fn correlation(&self) -> Result<f64> {
        let vx = self.marginal_x().variance();
        let vy = self.marginal_y().variance();
        if vx <= 0.0 {
            return Err(Error::UndefinedCorrelation("first coordinate"));
        }
        if vy <= 0.0 {
            return Err(Error::UndefinedCorrelation("second coordinate"));
        }
        Ok((self.covariance() / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_one_correlation() {
        let joint = JointDistribution::new(
            [(1, 1), (2, 4), (3, 1), (4, 4)].map(|(h, a)| (h, a, 0.25)),
        )
        .unwrap();
        let rho = joint.correlation().unwrap();
        assert!((rho - 1.0 / 5f64.sqrt()).abs() < 1e-12, "{rho}");
    }

    #[test]
    fn independent_product_is_uncorrelated() {
        let x = DiscreteDistribution::new([(0, 0.3), (2, 0.7)]).unwrap();
        let y = DiscreteDistribution::new([(-1, 0.5), (1, 0.25), (5, 0.25)]).unwrap();
        let atoms = x
            .atoms()
            .iter()
            .flat_map(|&(a, pa)| y.atoms().iter().map(move |&(b, pb)| (a, b, pa * pb)));
        let rho = JointDistribution::new(atoms).unwrap().correlation().unwrap();
        assert!(rho.abs() < 1e-12);
    }

    #[test]
    fn identity_is_perfectly_correlated() {
        let joint = JointDistribution::new((1..=5).map(|v| (v, v, 0.2))).unwrap();
        assert!((joint.correlation().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_marginal_has_no_correlation() {
        let joint = JointDistribution::new([(1, 1, 0.5), (1, 2, 0.5)]).unwrap();
        assert!(matches!(
            joint.correlation(),
            Err(Error::UndefinedCorrelation(_))
        ));
    }
}
