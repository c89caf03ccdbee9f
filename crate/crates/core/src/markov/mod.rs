//! Slot-level absorbing Markov chains for the forwarding dynamics.
//!
//! Each transition is one slot. Transient states mirror the simulator's
//! phases: an initial switch (`Launch`), transmitting on a route
//! (`Transmit`), and the slots between a down link and the end of the next
//! switch (`Recover`). The destination is the single absorbing state.
//! Slot paths of the chain have the same law as [`simulate_packet`] traces.
//!
//! [`simulate_packet`]: crate::forwarding::simulate_packet

mod counterexample;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use nalgebra::{DMatrix, DVector};

pub use counterexample::{
    correlation_joint, counterexample_model, find_non_monotone_p, thm1_delta, thm2_delta,
    CounterexampleSpec,
};

use crate::distributions::DiscreteDistribution;
use crate::forwarding::{ForwardingModel, Policy, SlotConvention};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainState {
    Delivered,
    /// Initial switch onto `route`, `remaining` slots to go.
    Launch { remaining: u32, route: u32 },
    /// At hop distance `position` on a route of length `route`. Intermediate
    /// chains never condition on the route, so they store `route = 0`.
    Transmit { position: u32, route: u32 },
    /// Between a down link and the end of the next switch; the node
    /// requesting the route sits at hop distance `condition`.
    Recover { remaining: u64, condition: u32 },
}

impl ChainState {
    /// Hop distance of the packet (or of the node about to resend it).
    pub fn position(&self) -> u32 {
        match *self {
            ChainState::Delivered => 0,
            ChainState::Launch { route, .. } => route,
            ChainState::Transmit { position, .. } => position,
            ChainState::Recover { condition, .. } => condition,
        }
    }
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChainState::Delivered => write!(f, "delivered"),
            ChainState::Launch { remaining, route } => write!(f, "launch(route={route}, left={remaining})"),
            ChainState::Transmit { position, route } => write!(f, "transmit(pos={position}, route={route})"),
            ChainState::Recover { remaining, condition } => {
                write!(f, "recover(cond={condition}, left={remaining})")
            }
        }
    }
}

/// Absorbing chain with sparse transition rows.
#[derive(Debug, Clone)]
pub struct AbsorbingChain {
    policy: Policy,
    convention: SlotConvention,
    states: Vec<ChainState>,
    rows: Vec<Vec<(usize, f64)>>,
    absorbing: usize,
    /// Start state index for each initial route length `1..=h_max`.
    starts: Vec<usize>,
}

struct Builder<'a> {
    model: &'a ForwardingModel,
    policy: Policy,
    index: HashMap<ChainState, usize>,
    states: Vec<ChainState>,
    queue: VecDeque<usize>,
}

impl Builder<'_> {
    fn intern(&mut self, s: ChainState) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.states.len();
        self.states.push(s);
        self.index.insert(s, i);
        self.queue.push_back(i);
        i
    }

    fn transmit(&self, route: u32) -> ChainState {
        ChainState::Transmit {
            position: route,
            route: match self.policy {
                Policy::Source => route,
                Policy::Intermediate => 0,
            },
        }
    }

    /// Successors of `s` with their probabilities.
    fn successors(&self, s: ChainState) -> Vec<(ChainState, f64)> {
        let conv = self.model.convention();
        let p = self.model.p();
        let switch_to = |cond: u32, weight: f64| -> Vec<(ChainState, f64)> {
            self.model
                .alt_given(cond)
                .atoms()
                .iter()
                .map(|&(a, pa)| (self.transmit(a as u32), weight * pa))
                .collect()
        };
        match s {
            ChainState::Delivered => vec![(ChainState::Delivered, 1.0)],
            ChainState::Launch { remaining, route } => {
                if remaining > 1 {
                    vec![(ChainState::Launch { remaining: remaining - 1, route }, 1.0)]
                } else {
                    vec![(self.transmit(route), 1.0)]
                }
            }
            ChainState::Recover { remaining, condition } => {
                if remaining > 1 {
                    vec![(ChainState::Recover { remaining: remaining - 1, condition }, 1.0)]
                } else {
                    switch_to(condition, 1.0)
                }
            }
            ChainState::Transmit { position, route } => {
                let mut out = Vec::new();
                if p > 0.0 {
                    let next = if position == 1 {
                        ChainState::Delivered
                    } else {
                        ChainState::Transmit { position: position - 1, route }
                    };
                    out.push((next, p));
                }
                let q = 1.0 - p;
                if q > 0.0 {
                    let cond = self.policy.condition(route, position);
                    let waits = match self.model.wait_given(cond) {
                        Some(w) => w.atoms().to_vec(),
                        None => vec![(0, 1.0)],
                    };
                    for (w, pw) in waits {
                        let k = conv.recovery_slots(w as u32);
                        if k == 1 {
                            out.extend(switch_to(cond, q * pw));
                        } else {
                            out.push((
                                ChainState::Recover {
                                    remaining: k - 1,
                                    condition: cond,
                                },
                                q * pw,
                            ));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Builds the chain of `model` under `policy`, including start states for
/// every initial route length `1..=h_max`.
pub fn build_chain(model: &ForwardingModel, policy: Policy) -> Result<AbsorbingChain> {
    let mut b = Builder {
        model,
        policy,
        index: HashMap::new(),
        states: Vec::new(),
        queue: VecDeque::new(),
    };
    let conv = model.convention();
    let absorbing = b.intern(ChainState::Delivered);
    let starts: Vec<usize> = (1..=model.h_max())
        .map(|h| {
            let s = if conv.initial_slots() > 0 {
                ChainState::Launch {
                    remaining: conv.initial_slots(),
                    route: h,
                }
            } else {
                b.transmit(h)
            };
            b.intern(s)
        })
        .collect();

    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (s, prob) in b.successors(b.states[i]) {
            let j = b.intern(s);
            match merged.iter_mut().find(|(k, _)| *k == j) {
                Some(entry) => entry.1 += prob,
                None => merged.push((j, prob)),
            }
        }
        merged.sort_by_key(|&(j, _)| j);
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        rows[i] = merged;
    }
    rows.resize(b.states.len(), Vec::new());

    let chain = AbsorbingChain {
        policy,
        convention: conv,
        states: b.states,
        rows,
        absorbing,
        starts,
    };
    chain.validate()?;
    Ok(chain)
}

impl AbsorbingChain {
    fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, p)| p).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidDistribution(format!(
                    "row of {} sums to {sum}",
                    self.states[i]
                )));
            }
        }
        // Reverse reachability from the destination.
        let n = self.states.len();
        let mut preds = vec![Vec::new(); n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                if p > 0.0 {
                    preds[j].push(i);
                }
            }
        }
        let mut seen = vec![false; n];
        seen[self.absorbing] = true;
        let mut stack = vec![self.absorbing];
        while let Some(j) = stack.pop() {
            for &i in &preds[j] {
                if !seen[i] {
                    seen[i] = true;
                    stack.push(i);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(i) => Err(Error::Unreachable(self.states[i].to_string())),
            None => Ok(()),
        }
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn convention(&self) -> SlotConvention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ChainState] {
        &self.states
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn h_max(&self) -> u32 {
        self.starts.len() as u32
    }

    pub fn start_state(&self, h: u32) -> Result<usize> {
        h.checked_sub(1)
            .and_then(|i| self.starts.get(i as usize).copied())
            .ok_or_else(|| Error::arg(format!("start length {h} outside 1..={}", self.h_max())))
    }

    /// Expected slots to absorption from every state, by solving
    /// `(I - Q) t = 1` over the transient states.
    pub fn expected_absorption_times(&self) -> Result<Vec<f64>> {
        let transient: Vec<usize> = (0..self.len()).filter(|&i| i != self.absorbing).collect();
        let mut slot = vec![usize::MAX; self.len()];
        for (k, &i) in transient.iter().enumerate() {
            slot[i] = k;
        }
        let m = transient.len();
        let mut a = DMatrix::<f64>::identity(m, m);
        for (k, &i) in transient.iter().enumerate() {
            for &(j, p) in &self.rows[i] {
                if j != self.absorbing {
                    a[(k, slot[j])] -= p;
                }
            }
        }
        let ones = DVector::<f64>::from_element(m, 1.0);
        let t = a.lu().solve(&ones).ok_or(Error::Singular)?;
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        let mut out = vec![0.0; self.len()];
        for (k, &i) in transient.iter().enumerate() {
            out[i] = t[k];
        }
        Ok(out)
    }

    /// One slot of evolution of a state distribution.
    fn step(&self, dist: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; dist.len()];
        for (i, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(j, p) in &self.rows[i] {
                next[j] += mass * p;
            }
        }
        next
    }

    fn initial(&self, h: u32) -> Result<Vec<f64>> {
        let mut dist = vec![0.0; self.len()];
        dist[self.start_state(h)?] = 1.0;
        Ok(dist)
    }

    /// State distributions at slots `0..=max_tau` from start length `h`.
    pub fn evolve(&self, h: u32, max_tau: u64) -> Result<impl Iterator<Item = Vec<f64>> + '_> {
        let first = self.initial(h)?;
        Ok(std::iter::successors(Some(first), move |d| Some(self.step(d)))
            .take(max_tau as usize + 1))
    }

    fn position_law(&self, dist: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::from_weights(
            self.states
                .iter()
                .zip(dist)
                .map(|(s, &m)| (i64::from(s.position()), m.max(0.0))),
        )
        .expect("state distribution has positive mass")
    }
}


/// Mean delivery time `T_h` for each initial route length `h = 1..=h_max`.
pub fn mean_absorption_times(chain: &AbsorbingChain) -> Result<Vec<f64>> {
    let t = chain.expected_absorption_times()?;
    Ok(chain.starts.iter().map(|&i| t[i]).collect())
}

/// Exact delivery-time law up to a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryLaw {
    /// `pmf[t] = Pr{T = t}` for `t = 0..=horizon`.
    pub pmf: Vec<f64>,
    /// `Pr{T > horizon}`.
    pub tail: f64,
}

impl DeliveryLaw {
    pub fn horizon(&self) -> u64 {
        self.pmf.len() as u64 - 1
    }

    /// `Pr{T <= t}`.
    pub fn cdf(&self, t: i64) -> f64 {
        if t < 0 {
            return 0.0;
        }
        let upto = (t as usize).min(self.pmf.len() - 1);
        self.pmf[..=upto].iter().sum::<f64>().min(1.0)
    }

    /// Running CDF values for `t = 0..=horizon`.
    pub fn cdf_values(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pmf
            .iter()
            .map(|p| {
                acc += p;
                acc.min(1.0)
            })
            .collect()
    }

    /// Law of `T` conditioned on `T <= horizon`.
    pub fn conditional(&self) -> Result<DiscreteDistribution> {
        DiscreteDistribution::from_weights(
            self.pmf.iter().enumerate().map(|(t, &p)| (t as i64, p)),
        )
    }
}

/// Delivery-time law from start length `h`, iterating the transition
/// operator for `horizon` slots.
pub fn absorption_time_cdf(chain: &AbsorbingChain, h: u32, horizon: u64) -> Result<DeliveryLaw> {
    if horizon == 0 {
        return Err(Error::arg("horizon must be at least one slot"));
    }
    let mut pmf = Vec::with_capacity((horizon as usize).saturating_add(1).min(1 << 20));
    let mut absorbed = 0.0;
    for dist in chain.evolve(h, horizon)? {
        let now = dist[chain.absorbing];
        pmf.push((now - absorbed).max(0.0));
        absorbed = now;
    }
    Ok(DeliveryLaw {
        pmf,
        tail: (1.0 - absorbed).max(0.0),
    })
}

/// Law of the hop distance at slot `tau` from start length `h`; delivered
/// mass sits at position 0.
pub fn position_marginal(chain: &AbsorbingChain, h: u32, tau: u64) -> Result<DiscreteDistribution> {
    let last = chain.evolve(h, tau)?.last().expect("at least one slot");
    Ok(chain.position_law(&last))
}

/// Position laws for every slot `0..=max_tau`.
pub fn position_marginals(
    chain: &AbsorbingChain,
    h: u32,
    max_tau: u64,
) -> Result<Vec<DiscreteDistribution>> {
    Ok(chain
        .evolve(h, max_tau)?
        .map(|d| chain.position_law(&d))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ConditionalFamily;

    fn model(values: &[i64], p: f64, conv: SlotConvention) -> ForwardingModel {
        ForwardingModel::new(p, ConditionalFamily::deterministic(values).unwrap(), None, conv)
            .unwrap()
    }

    #[test]
    fn perfect_links_absorb_in_route_length() {
        let m = model(&[1, 2, 3], 1.0, SlotConvention::BARE);
        for policy in Policy::BOTH {
            let c = build_chain(&m, policy).unwrap();
            let law = absorption_time_cdf(&c, 3, 10).unwrap();
            assert_eq!(law.pmf[3], 1.0);
            assert_eq!(law.cdf(2), 0.0);
            assert_eq!(law.tail, 0.0);
            assert_eq!(mean_absorption_times(&c).unwrap(), vec![1.0, 2.0, 3.0]);
            assert_eq!(position_marginal(&c, 3, 0).unwrap(), DiscreteDistribution::point_mass(3));
            assert_eq!(position_marginal(&c, 3, 1).unwrap(), DiscreteDistribution::point_mass(2));
        }
        let m = model(&[1, 2, 3], 1.0, SlotConvention::TR_A);
        let c = build_chain(&m, Policy::Source).unwrap();
        assert_eq!(mean_absorption_times(&c).unwrap(), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn retry_in_place_is_linear_for_intermediate() {
        for h_max in [2u32, 5, 9] {
            let values: Vec<i64> = (1..=h_max as i64).collect();
            let m = model(&values, 0.4, SlotConvention::BARE);
            let c = build_chain(&m, Policy::Intermediate).unwrap();
            assert_eq!(c.len(), h_max as usize + 1);
        }
    }

    #[test]
    fn geometric_cycle_closed_form() {
        let p = 0.3;
        let m = model(&[1, 2], p, SlotConvention::DETECT);
        let c = build_chain(&m, Policy::Intermediate).unwrap();
        let t = mean_absorption_times(&c).unwrap();
        assert!((t[0] - (2.0 - p) / p).abs() < 1e-9);
        assert!((t[1] - 2.0 * (2.0 - p) / p).abs() < 1e-9);
    }

    #[test]
    fn law_mass_is_conserved() {
        let alt = ConditionalFamily::from_fn(4, |h| DiscreteDistribution::uniform(1, h as i64)).unwrap();
        let wait = ConditionalFamily::from_fn(4, |h| DiscreteDistribution::uniform(0, h as i64)).unwrap();
        let m = ForwardingModel::new(0.35, alt, Some(wait), SlotConvention::TR_A).unwrap();
        let c = build_chain(&m, Policy::Source).unwrap();
        for (tau, d) in position_marginals(&c, 4, 60).unwrap().iter().enumerate() {
            let total: f64 = d.atoms().iter().map(|a| a.1).sum();
            assert!((total - 1.0).abs() < 1e-9, "tau {tau}");
        }
        let law = absorption_time_cdf(&c, 4, 400).unwrap();
        let values = law.cdf_values();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        assert!((values.last().unwrap() + law.tail - 1.0).abs() < 1e-9);
        assert!(absorption_time_cdf(&c, 5, 10).is_err());
        assert!(absorption_time_cdf(&c, 1, 0).is_err());
    }
}
