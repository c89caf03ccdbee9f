//! Slotted-time forwarding of a single packet.
//!
//! A packet lives through consecutive transmission periods. Each period
//! starts on a route of length `a` and the packet advances one hop per slot
//! while the link at its position is up (probability `p`). A down link ends
//! the period: the node that requests the next route waits `w` slots, the
//! packet switches onto an alternate route whose length is drawn from
//! `A | H = h`, and the next period starts. Under source forwarding the
//! condition value `h` is the previous route length; under intermediate
//! forwarding it is the hop distance where the packet got stuck.
//!
//! Slot accounting is set by [`SlotConvention`]: a break costs
//! `break_detection_cost + w + switch_cost` slots, the down slot itself
//! included, and `count_initial_switch` charges `switch_cost` slots before
//! the first transmission.

mod runspec;
mod sim;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use runspec::{parse_run_spec, write_run_spec, RunSpec};
pub use sim::{
    empirical_delivery_cdf, simulate_coupled_pair, simulate_packet, verify_dominance_empirical,
    DeliverySample, DominanceCheck, Period, SlottedTrace, DEFAULT_HORIZON,
};

use crate::distributions::{ConditionalFamily, DiscreteDistribution};
use crate::{Error, Result};

/// Which node requests the alternate route after a break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// The stuck node drops the packet; the source re-sends.
    Source,
    /// The stuck node stores the packet and requests a partial route.
    Intermediate,
}

impl Policy {
    pub const BOTH: [Policy; 2] = [Policy::Source, Policy::Intermediate];

    /// Condition value for the next wait and alternate route after a break
    /// on a route of length `route` at hop distance `position`.
    pub fn condition(self, route: u32, position: u32) -> u32 {
        match self {
            Policy::Source => route,
            Policy::Intermediate => position,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Policy::Source => "source",
            Policy::Intermediate => "intermediate",
        })
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" | "src" => Ok(Policy::Source),
            "intermediate" | "int" => Ok(Policy::Intermediate),
            other => Err(Error::arg(format!("unknown policy {other:?}"))),
        }
    }
}

/// Slot accounting for switches and break detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SlotConvention {
    /// Charge `switch_cost` slots before the first transmission.
    pub count_initial_switch: bool,
    /// Extra slots spent noticing a broken link.
    pub break_detection_cost: u32,
    /// Slots per switch onto a new route.
    pub switch_cost: u32,
}

impl SlotConvention {
    /// Initial switch slot counted; the down slot doubles as the next switch slot.
    pub const TR_A: SlotConvention = SlotConvention {
        count_initial_switch: true,
        break_detection_cost: 0,
        switch_cost: 1,
    };
    /// No initial switch; the down slot doubles as the next switch slot.
    pub const BARE: SlotConvention = SlotConvention {
        count_initial_switch: false,
        break_detection_cost: 0,
        switch_cost: 1,
    };
    /// No initial switch; a break costs a detection slot plus a switch slot.
    pub const DETECT: SlotConvention = SlotConvention {
        count_initial_switch: false,
        break_detection_cost: 1,
        switch_cost: 1,
    };

    pub const PRESETS: [(&'static str, SlotConvention); 3] = [
        ("tr-a", Self::TR_A),
        ("bare", Self::BARE),
        ("detect", Self::DETECT),
    ];

    pub fn validate(&self) -> Result<()> {
        if self.break_detection_cost + self.switch_cost == 0 {
            return Err(Error::arg(
                "a break must cost at least one slot (detection or switch)",
            ));
        }
        Ok(())
    }

    pub fn initial_slots(&self) -> u32 {
        if self.count_initial_switch {
            self.switch_cost
        } else {
            0
        }
    }

    /// Slots from the down slot through the end of the next switch.
    pub fn recovery_slots(&self, wait: u32) -> u64 {
        u64::from(self.break_detection_cost) + u64::from(wait) + u64::from(self.switch_cost)
    }

    pub fn preset_name(&self) -> Option<&'static str> {
        Self::PRESETS
            .iter()
            .find(|(_, c)| c == self)
            .map(|(name, _)| *name)
    }
}

impl fmt::Display for SlotConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.preset_name() {
            Some(name) => f.pad(name),
            None => write!(
                f,
                "custom(initial={}, detect={}, switch={})",
                self.count_initial_switch, self.break_detection_cost, self.switch_cost
            ),
        }
    }
}

impl FromStr for SlotConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::PRESETS
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(s))
            .map(|(_, c)| *c)
            .ok_or_else(|| Error::arg(format!("unknown slot convention {s:?}")))
    }
}

/// Link, alternate-route and waiting behaviour shared by the simulator and
/// the chain solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardingModel {
    p: f64,
    alt: ConditionalFamily,
    wait: Option<ConditionalFamily>,
    convention: SlotConvention,
}

impl ForwardingModel {
    /// `alt` fixes `h_max`; its entries must be supported on `1..=h_max`.
    /// `wait`, if given, must cover the same range with nonnegative support.
    pub fn new(
        p: f64,
        alt: ConditionalFamily,
        wait: Option<ConditionalFamily>,
        convention: SlotConvention,
    ) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::arg(format!("link-up probability must be in (0, 1], got {p}")));
        }
        convention.validate()?;
        let h_max = alt.h_max();
        for (h, d) in alt.iter() {
            if d.min() < 1 || d.max() > i64::from(h_max) {
                return Err(Error::arg(format!(
                    "alternate route lengths for h={h} must lie in 1..={h_max}, got {d}"
                )));
            }
        }
        if let Some(w) = &wait {
            if w.h_max() != h_max {
                return Err(Error::arg(format!(
                    "wait family covers 1..={}, alternate family 1..={h_max}",
                    w.h_max()
                )));
            }
            for (h, d) in w.iter() {
                if d.min() < 0 || d.max() > i64::from(u32::MAX) {
                    return Err(Error::arg(format!("wait for h={h} must be nonnegative, got {d}")));
                }
            }
        }
        Ok(Self {
            p,
            alt,
            wait,
            convention,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn h_max(&self) -> u32 {
        self.alt.h_max()
    }

    pub fn alt(&self) -> &ConditionalFamily {
        &self.alt
    }

    pub fn wait(&self) -> Option<&ConditionalFamily> {
        self.wait.as_ref()
    }

    pub fn convention(&self) -> SlotConvention {
        self.convention
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(p, self.alt.clone(), self.wait.clone(), self.convention)
    }

    pub fn with_convention(&self, convention: SlotConvention) -> Result<Self> {
        Self::new(self.p, self.alt.clone(), self.wait.clone(), convention)
    }

    pub(crate) fn check_start(&self, a1: u32) -> Result<()> {
        if a1 == 0 || a1 > self.h_max() {
            return Err(Error::arg(format!(
                "initial route length {a1} outside 1..={}",
                self.h_max()
            )));
        }
        Ok(())
    }

    pub fn alt_given(&self, h: u32) -> &DiscreteDistribution {
        self.alt.get(h).expect("condition value within 1..=h_max")
    }

    /// Wait law given `h`; a point mass at zero when no wait family is set.
    pub fn wait_given(&self, h: u32) -> Option<&DiscreteDistribution> {
        self.wait.as_ref().map(|w| w.get(h).expect("condition value within 1..=h_max"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_print() {
        for (name, c) in SlotConvention::PRESETS {
            assert_eq!(name.parse::<SlotConvention>().unwrap(), c);
            assert_eq!(c.to_string(), name);
        }
        assert!("fast".parse::<SlotConvention>().is_err());
        assert_eq!(SlotConvention::TR_A.initial_slots(), 1);
        assert_eq!(SlotConvention::DETECT.recovery_slots(3), 5);
    }

    #[test]
    fn zero_cost_breaks_are_rejected() {
        let c = SlotConvention {
            count_initial_switch: false,
            break_detection_cost: 0,
            switch_cost: 0,
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn model_validation() {
        let alt = ConditionalFamily::deterministic(&[1, 2, 3]).unwrap();
        assert!(ForwardingModel::new(0.0, alt.clone(), None, SlotConvention::BARE).is_err());
        assert!(ForwardingModel::new(1.1, alt.clone(), None, SlotConvention::BARE).is_err());
        let too_long = ConditionalFamily::deterministic(&[1, 4, 3]).unwrap();
        assert!(ForwardingModel::new(0.5, too_long, None, SlotConvention::BARE).is_err());
        let zero = ConditionalFamily::deterministic(&[0, 1, 1]).unwrap();
        assert!(ForwardingModel::new(0.5, zero, None, SlotConvention::BARE).is_err());
        let short_wait = ConditionalFamily::deterministic(&[0, 1]).unwrap();
        assert!(ForwardingModel::new(0.5, alt.clone(), Some(short_wait), SlotConvention::BARE).is_err());
        let negative_wait = ConditionalFamily::deterministic(&[0, -1, 1]).unwrap();
        assert!(ForwardingModel::new(0.5, alt.clone(), Some(negative_wait), SlotConvention::BARE).is_err());
        let m = ForwardingModel::new(0.5, alt, None, SlotConvention::BARE).unwrap();
        assert!(m.check_start(0).is_err());
        assert!(m.check_start(4).is_err());
        assert!(m.check_start(3).is_ok());
    }
}
