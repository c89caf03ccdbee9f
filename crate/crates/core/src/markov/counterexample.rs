//! The two counterexample families where a plausible alternate-route model
//! still yields mean delivery times that are not monotone in the start
//! length, together with their closed-form `T_2 - T_3` expressions.

use crate::distributions::{ConditionalFamily, DiscreteDistribution, JointDistribution};
use crate::forwarding::{ForwardingModel, Policy, SlotConvention};
use crate::{Error, Result};

use super::{build_chain, mean_absorption_times};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CounterexampleSpec {
    /// `A | H = 1, 2, 3, 4` is deterministic `1, 4, 1, 4`.
    Correlation { p: f64 },
    /// `A_1 = 1`, `A_2 = 2`, `A_3 = 3` with probability `alpha`, else 1.
    Expectation { p: f64, alpha: f64 },
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl CounterexampleSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CounterexampleSpec::Correlation { p } => open_unit("p", p),
            CounterexampleSpec::Expectation { p, alpha } => {
                open_unit("p", p)?;
                open_unit("alpha", alpha)
            }
        }
    }

    pub fn p(&self) -> f64 {
        match *self {
            CounterexampleSpec::Correlation { p } | CounterexampleSpec::Expectation { p, .. } => p,
        }
    }

    pub fn alt_family(&self) -> Result<ConditionalFamily> {
        self.validate()?;
        match *self {
            CounterexampleSpec::Correlation { .. } => ConditionalFamily::deterministic(&[1, 4, 1, 4]),
            CounterexampleSpec::Expectation { alpha, .. } => ConditionalFamily::new([
                (1, DiscreteDistribution::point_mass(1)),
                (2, DiscreteDistribution::point_mass(2)),
                (3, DiscreteDistribution::new([(1, 1.0 - alpha), (3, alpha)])?),
            ]),
        }
    }

    /// Closed form of `T_2 - T_3` for this family.
    pub fn delta(&self) -> Result<f64> {
        match *self {
            CounterexampleSpec::Correlation { p } => thm1_delta(p),
            CounterexampleSpec::Expectation { p, alpha } => thm2_delta(p, alpha),
        }
    }

    /// Largest `p` for which the closed form predicts `T_3 < T_2`.
    pub fn threshold(&self) -> f64 {
        match *self {
            CounterexampleSpec::Correlation { .. } => (5f64.sqrt() - 1.0) / 2.0,
            CounterexampleSpec::Expectation { alpha, .. } => (2.0 - 2.0 * alpha) / (3.0 - 2.0 * alpha),
        }
    }
}

/// Forwarding model with the counterexample's alternate-route family and no
/// waiting.
pub fn counterexample_model(spec: CounterexampleSpec, convention: SlotConvention) -> Result<ForwardingModel> {
    ForwardingModel::new(spec.p(), spec.alt_family()?, None, convention)
}

/// `T_2 - T_3 = (1 + 2p)/p^2 - (2p^2 + 2)/(p^3 - p^2 + p)`.
pub fn thm1_delta(p: f64) -> Result<f64> {
    open_unit("p", p)?;
    Ok((1.0 + 2.0 * p) / (p * p) - (2.0 * p * p + 2.0) / (p * p * p - p * p + p))
}

/// `T_2 - T_3 = 2/p - 3/(1 - alpha + alpha p)`.
pub fn thm2_delta(p: f64, alpha: f64) -> Result<f64> {
    open_unit("p", p)?;
    open_unit("alpha", alpha)?;
    Ok(2.0 / p - 3.0 / (1.0 - alpha + alpha * p))
}

/// Joint law of `(H, A)` with `H` uniform on `1..=4` and the correlation
/// family for `A | H`.
pub fn correlation_joint() -> JointDistribution {
    let family = ConditionalFamily::deterministic(&[1, 4, 1, 4]).expect("static family");
    let h = DiscreteDistribution::uniform(1, 4).expect("static range");
    JointDistribution::from_conditional(&h, &family).expect("static family")
}

/// First `p` in `grid` where the chain's mean times drop between
/// consecutive start lengths, with the `h` such that `T_{h+1} < T_h`.
pub fn find_non_monotone_p(
    model: &ForwardingModel,
    policy: Policy,
    grid: &[f64],
    tol: f64,
) -> Result<Option<(f64, u32, Vec<f64>)>> {
    for &p in grid {
        let chain = build_chain(&model.with_p(p)?, policy)?;
        let t = mean_absorption_times(&chain)?;
        if let Some(i) = t.windows(2).position(|w| w[1] < w[0] - tol) {
            return Ok(Some((p, i as u32 + 1, t)));
        }
    }
    Ok(None)
}
