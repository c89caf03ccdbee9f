//! Finite discrete distributions and stochastic-order predicates.

mod discrete;
mod empirical;
mod family;
mod joint;
mod order;
pub mod table;

pub use discrete::{DiscreteDistribution, SUM_TOLERANCE};
pub use empirical::{dkw_epsilon, EmpiricalDistribution};
pub use family::ConditionalFamily;
pub use joint::JointDistribution;
pub use order::{
    check_transitivity_instance, dominates, is_stochastically_monotone, max_cdf_excess,
    monotone_scan, MonotonicityReport, TransitivityReport, Violation, EXACT_TOLERANCE,
};

/// Pearson correlation of an exact joint law.
pub fn correlation(joint: &JointDistribution) -> crate::Result<f64> {
    joint.correlation()
}
