use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{ForwardingModel, Policy, SlotConvention};
use crate::distributions::{
    dkw_epsilon, is_stochastically_monotone, EmpiricalDistribution, EXACT_TOLERANCE,
};
use crate::seed;
use crate::{Error, Result};

/// Default truncation horizon in slots.
pub const DEFAULT_HORIZON: u64 = 1_000_000;

/// Random streams of one run, indexed by transmission period.
///
/// Period `l` always reads its link states, wait and alternate route from
/// the same substreams regardless of policy, so running both policies with
/// one seed couples them: identical up/down sequences per period and
/// quantile-coupled route and wait draws.
struct Streams {
    base: ChaCha8Rng,
}

const LINK: u64 = 1;
const ALT: u64 = 2;
const WAIT: u64 = 3;

impl Streams {
    fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn stream(&self, kind: u64, period: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream((kind << 48) | period);
        rng
    }

    fn uniform(&self, kind: u64, period: u64) -> f64 {
        self.stream(kind, period).random()
    }
}

/// One transmission period: `wait` slots before it (zero for the first),
/// the route length `route` adopted at its switch, and `hops` transmitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Period {
    pub wait: u32,
    pub route: u32,
    pub hops: u32,
}

impl Period {
    /// Hop distance at the end of the period.
    pub fn end_position(&self) -> u32 {
        self.route - self.hops
    }
}

/// Record of one packet's life.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlottedTrace {
    pub policy: Policy,
    pub convention: SlotConvention,
    pub periods: Vec<Period>,
    pub delivered: bool,
    /// Delivery time if delivered, otherwise the horizon.
    pub total_slots: u64,
}

impl SlottedTrace {
    pub fn initial_route(&self) -> u32 {
        self.periods.first().map_or(0, |p| p.route)
    }

    /// Condition value used for the draws after period `l` broke.
    fn condition_after(&self, l: usize) -> u32 {
        let p = self.periods[l];
        self.policy.condition(p.route, p.end_position())
    }

    pub fn transmission_slots(&self) -> u64 {
        self.periods.iter().map(|p| u64::from(p.hops)).sum()
    }

    /// Switch events after breaks (excluding any initial switch).
    pub fn breaks(&self) -> usize {
        self.periods.len().saturating_sub(1)
    }

    pub fn wait_slots(&self) -> u64 {
        self.periods.iter().map(|p| u64::from(p.wait)).sum()
    }

    /// Hop distance at the end of every slot `0..=total_slots`; entry 0 is
    /// the initial route length and the destination is position 0.
    pub fn positions(&self) -> Vec<u32> {
        let conv = self.convention;
        let a1 = self.initial_route();
        let mut pos = vec![a1];
        pos.extend(std::iter::repeat_n(a1, conv.initial_slots() as usize));
        for (l, period) in self.periods.iter().enumerate() {
            if l > 0 {
                let cond = self.condition_after(l - 1);
                let k = conv.recovery_slots(period.wait) as usize;
                pos.extend(std::iter::repeat_n(cond, k - 1));
                pos.push(period.route);
            }
            pos.extend((1..=period.hops).map(|i| period.route - i));
        }
        let len = self.total_slots as usize + 1;
        if pos.len() < len {
            // Censored during a recovery that started after the last period.
            let fill = self.condition_after(self.periods.len() - 1);
            pos.resize(len, fill);
        }
        pos.truncate(len);
        pos
    }

    /// Checks the structural invariants of a trace.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let Some(first) = self.periods.first() else {
            return Err("trace has no periods".into());
        };
        if first.wait != 0 {
            return Err(format!("first period waits {} slots", first.wait));
        }
        let last = self.periods.len() - 1;
        for (l, p) in self.periods.iter().enumerate() {
            if p.route == 0 || p.hops > p.route {
                return Err(format!("period {l}: hops {} on route {}", p.hops, p.route));
            }
            if l < last && p.hops == p.route {
                return Err(format!("period {l} reached the destination but is not last"));
            }
        }
        let reached = self.periods[last].end_position() == 0;
        if self.delivered != reached {
            return Err(format!("delivered={} but final position {}", self.delivered, self.periods[last].end_position()));
        }
        if self.delivered {
            let expected = u64::from(self.convention.initial_slots())
                + self.transmission_slots()
                + self.periods[1..]
                    .iter()
                    .map(|p| self.convention.recovery_slots(p.wait))
                    .sum::<u64>();
            if expected != self.total_slots {
                return Err(format!("slot total {} != accounted {expected}", self.total_slots));
            }
        }
        let pos = self.positions();
        if pos.len() as u64 != self.total_slots + 1 {
            return Err("position sequence length mismatch".into());
        }
        if self.delivered && pos[pos.len() - 1] != 0 {
            return Err("delivered trace does not end at the destination".into());
        }
        Ok(())
    }
}

/// Simulates one packet starting on a route of length `a1`, truncated after
/// `horizon` slots.
pub fn simulate_packet(
    model: &ForwardingModel,
    policy: Policy,
    a1: u32,
    seed: u64,
    horizon: u64,
) -> Result<SlottedTrace> {
    model.check_start(a1)?;
    if horizon == 0 {
        return Err(Error::arg("horizon must be at least one slot"));
    }
    let streams = Streams::new(seed);
    let conv = model.convention();
    let mut trace = SlottedTrace {
        policy,
        convention: conv,
        periods: Vec::new(),
        delivered: false,
        total_slots: horizon,
    };
    let mut t = u64::from(conv.initial_slots());
    let (mut route, mut wait) = (a1, 0u32);
    for l in 0u64.. {
        let mut link = streams.stream(LINK, l);
        let mut hops = 0;
        let mut broke = false;
        while hops < route && t < horizon {
            t += 1;
            if link.random_bool(model.p()) {
                hops += 1;
            } else {
                broke = true;
                break;
            }
        }
        trace.periods.push(Period { wait, route, hops });
        if hops == route {
            trace.delivered = true;
            trace.total_slots = t;
            return Ok(trace);
        }
        if !broke {
            return Ok(trace);
        }
        let cond = policy.condition(route, route - hops);
        wait = match model.wait_given(cond) {
            Some(w) => w.quantile(streams.uniform(WAIT, l + 1)) as u32,
            None => 0,
        };
        route = model.alt_given(cond).quantile(streams.uniform(ALT, l + 1)) as u32;
        t += conv.recovery_slots(wait) - 1;
        if t > horizon {
            return Ok(trace);
        }
    }
    unreachable!("period counter exhausted")
}

/// Source and intermediate packets driven by the same random streams.
pub fn simulate_coupled_pair(
    model: &ForwardingModel,
    a1: u32,
    seed: u64,
    horizon: u64,
) -> Result<(SlottedTrace, SlottedTrace)> {
    Ok((
        simulate_packet(model, Policy::Source, a1, seed, horizon)?,
        simulate_packet(model, Policy::Intermediate, a1, seed, horizon)?,
    ))
}

/// Delivery times of many independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliverySample {
    /// Delivery times of the runs that finished within the horizon.
    pub times: EmpiricalDistribution,
    pub censored: u64,
    pub runs: u64,
}

impl DeliverySample {
    /// `Pr{T <= t}` estimated over all runs, censored runs counting as `T > t`.
    pub fn cdf(&self, t: i64) -> f64 {
        self.times.count_at_most(t) as f64 / self.runs as f64
    }

    pub fn mean(&self) -> Option<f64> {
        self.times.mean()
    }

    pub fn standard_error(&self) -> Option<f64> {
        self.times.standard_error()
    }
}

/// Runs `runs` packets; run `i` uses seed `derive(seed, i)`.
pub fn empirical_delivery_cdf(
    model: &ForwardingModel,
    policy: Policy,
    a1: u32,
    runs: u64,
    seed: u64,
    horizon: u64,
) -> Result<DeliverySample> {
    if runs == 0 {
        return Err(Error::arg("need at least one run"));
    }
    model.check_start(a1)?;
    let outcomes: Vec<Option<u64>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            simulate_packet(model, policy, a1, seed::derive(seed, i), horizon)
                .map(|t| t.delivered.then_some(t.total_slots))
        })
        .collect::<Result<_>>()?;
    let mut times = EmpiricalDistribution::new();
    let mut censored = 0;
    for o in outcomes {
        match o {
            Some(t) => times.push(t as i64),
            None => censored += 1,
        }
    }
    Ok(DeliverySample {
        times,
        censored,
        runs,
    })
}

/// Empirical comparison of delivery-time CDFs under both policies.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceCheck {
    pub source: DeliverySample,
    pub intermediate: DeliverySample,
    /// `max_t F_source(t) - F_intermediate(t)`; dominance predicts `<= 0`.
    pub max_violation: f64,
    pub violation_at: i64,
    /// DKW half-width at level 0.999 for one sample.
    pub band: f64,
    pub alt_monotone: bool,
    /// `true` when no wait family is set.
    pub wait_monotone: bool,
}

impl DominanceCheck {
    pub fn premise_holds(&self) -> bool {
        self.alt_monotone && self.wait_monotone
    }

    /// Allowed sampling slack: one band per empirical CDF.
    pub fn bound(&self) -> f64 {
        2.0 * self.band
    }

    pub fn within_bound(&self) -> bool {
        self.max_violation <= self.bound()
    }
}

/// Simulates both policies on common seeds and measures how far the source
/// delivery-time CDF rises above the intermediate one.
pub fn verify_dominance_empirical(
    model: &ForwardingModel,
    a1: u32,
    runs: u64,
    seed: u64,
    horizon: u64,
) -> Result<DominanceCheck> {
    let source = empirical_delivery_cdf(model, Policy::Source, a1, runs, seed, horizon)?;
    let intermediate = empirical_delivery_cdf(model, Policy::Intermediate, a1, runs, seed, horizon)?;
    let mut points: Vec<i64> = source
        .times
        .counts()
        .keys()
        .chain(intermediate.times.counts().keys())
        .copied()
        .collect();
    points.sort_unstable();
    points.dedup();
    let (mut max_violation, mut violation_at) = (0.0, 0);
    for &t in &points {
        let v = source.cdf(t) - intermediate.cdf(t);
        if v > max_violation {
            (max_violation, violation_at) = (v, t);
        }
    }
    Ok(DominanceCheck {
        max_violation,
        violation_at,
        band: dkw_epsilon(runs, 0.001),
        alt_monotone: is_stochastically_monotone(model.alt(), EXACT_TOLERANCE).monotone,
        wait_monotone: model
            .wait()
            .is_none_or(|w| is_stochastically_monotone(w, EXACT_TOLERANCE).monotone),
        source,
        intermediate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{ConditionalFamily, DiscreteDistribution};

    fn retry_in_place(h_max: u32, p: f64, conv: SlotConvention) -> ForwardingModel {
        let values: Vec<i64> = (1..=h_max as i64).collect();
        ForwardingModel::new(p, ConditionalFamily::deterministic(&values).unwrap(), None, conv)
            .unwrap()
    }

    #[test]
    fn perfect_links_bare() {
        let m = retry_in_place(3, 1.0, SlotConvention::BARE);
        let t = simulate_packet(&m, Policy::Source, 3, 1, 100).unwrap();
        assert!(t.delivered);
        assert_eq!(t.total_slots, 3);
        assert_eq!(t.periods, vec![Period { wait: 0, route: 3, hops: 3 }]);
        assert_eq!(t.positions(), vec![3, 2, 1, 0]);
        t.validate().unwrap();
    }

    #[test]
    fn perfect_links_with_initial_switch() {
        let m = retry_in_place(3, 1.0, SlotConvention::TR_A);
        let t = simulate_packet(&m, Policy::Intermediate, 3, 1, 100).unwrap();
        assert_eq!(t.total_slots, 4);
        assert_eq!(t.positions(), vec![3, 3, 2, 1, 0]);
        t.validate().unwrap();
    }

    #[test]
    fn geometric_cycles_under_detect() {
        // Each failed slot costs a detection and a switch slot: E[T] = (2 - p) / p.
        let p = 1.0 / 3.0;
        let m = retry_in_place(1, p, SlotConvention::DETECT);
        let s = empirical_delivery_cdf(&m, Policy::Intermediate, 1, 100_000, 17, DEFAULT_HORIZON)
            .unwrap();
        assert_eq!(s.censored, 0);
        let expected = (2.0 - p) / p;
        let (mean, se) = (s.mean().unwrap(), s.standard_error().unwrap());
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn horizon_truncates() {
        let m = retry_in_place(4, 0.05, SlotConvention::DETECT);
        let t = simulate_packet(&m, Policy::Source, 4, 3, 5).unwrap();
        assert!(!t.delivered);
        assert_eq!(t.total_slots, 5);
        assert_eq!(t.positions().len(), 6);
        t.validate().unwrap();
        assert!(simulate_packet(&m, Policy::Source, 4, 3, 0).is_err());
        assert!(simulate_packet(&m, Policy::Source, 5, 3, 10).is_err());
    }

    #[test]
    fn coupled_pair_shares_link_states() {
        let alt = ConditionalFamily::from_fn(5, |h| {
            DiscreteDistribution::uniform((h as i64 - 1).max(1), h as i64)
        })
        .unwrap();
        let m = ForwardingModel::new(0.5, alt, None, SlotConvention::BARE).unwrap();
        for seed in 0..200 {
            let (s, i) = simulate_coupled_pair(&m, 5, seed, DEFAULT_HORIZON).unwrap();
            let common = s.periods.len().min(i.periods.len());
            for l in 0..common {
                let last = l + 1 == s.periods.len() || l + 1 == i.periods.len();
                if !last {
                    assert_eq!(s.periods[l].hops, i.periods[l].hops, "seed {seed} period {l}");
                }
                assert!(s.periods[l].route >= i.periods[l].route);
            }
            assert!(i.total_slots <= s.total_slots);
        }
    }

    #[test]
    fn source_waits_condition_on_route() {
        let alt = ConditionalFamily::deterministic(&[1, 2, 3]).unwrap();
        let wait = ConditionalFamily::deterministic(&[0, 10, 20]).unwrap();
        let m = ForwardingModel::new(0.5, alt, Some(wait), SlotConvention::BARE).unwrap();
        for seed in 0..100 {
            let t = simulate_packet(&m, Policy::Source, 3, seed, DEFAULT_HORIZON).unwrap();
            t.validate().unwrap();
            assert!(t.periods[1..].iter().all(|p| p.wait == 20 && p.route == 3));
            let t = simulate_packet(&m, Policy::Intermediate, 3, seed, DEFAULT_HORIZON).unwrap();
            t.validate().unwrap();
            for w in t.periods.windows(2) {
                assert_eq!(w[1].route, w[0].end_position());
                assert_eq!(u64::from(w[1].wait), 10 * u64::from(w[0].end_position() - 1));
            }
        }
    }
}
