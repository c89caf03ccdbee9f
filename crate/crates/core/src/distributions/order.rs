//! First-order stochastic dominance and stochastic monotonicity.
//!
//! `X` dominates `Y` when `F_X(t) <= F_Y(t)` for every `t`. A conditional
//! family is stochastically monotone when every entry dominates all entries
//! with a smaller condition value. All predicates are weak: equality passes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{ConditionalFamily, DiscreteDistribution};
use crate::{Error, Result};

/// Default tolerance for exactly computed distributions.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// Evaluation points where either CDF can change: the union of supports.
fn union_support(x: &DiscreteDistribution, y: &DiscreteDistribution) -> Vec<i64> {
    let set: BTreeSet<i64> = x.support().chain(y.support()).collect();
    set.into_iter().collect()
}

/// Cumulative masses at each point of `points` (which must be sorted).
fn cdf_at(d: &DiscreteDistribution, points: &[i64]) -> Vec<f64> {
    let atoms = d.atoms();
    let mut acc = 0.0;
    let mut i = 0;
    points
        .iter()
        .map(|&t| {
            while i < atoms.len() && atoms[i].0 <= t {
                acc += atoms[i].1;
                i += 1;
            }
            if i == atoms.len() {
                1.0
            } else {
                acc
            }
        })
        .collect()
}

/// `max_t F_x(t) - F_y(t)` and the smallest `t` attaining it.
pub fn max_cdf_excess(x: &DiscreteDistribution, y: &DiscreteDistribution) -> (f64, i64) {
    let points = union_support(x, y);
    let fx = cdf_at(x, &points);
    let fy = cdf_at(y, &points);
    let mut best = (f64::NEG_INFINITY, points[0]);
    for ((&t, a), b) in points.iter().zip(fx).zip(fy) {
        if a - b > best.0 {
            best = (a - b, t);
        }
    }
    best
}

/// Weak first-order dominance of `x` over `y`: `F_x(t) <= F_y(t) + tol`
/// at every point of the union of supports.
pub fn dominates(x: &DiscreteDistribution, y: &DiscreteDistribution, tol: f64) -> bool {
    let points = union_support(x, y);
    cdf_at(x, &points)
        .into_iter()
        .zip(cdf_at(y, &points))
        .all(|(a, b)| a <= b + tol)
}

/// A pair of condition values whose laws are in the wrong order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation<K> {
    pub lower: K,
    pub upper: K,
    /// Crossing point: `F_upper(t) > F_lower(t) + tol` here.
    pub t: i64,
    /// `F_upper(t) - F_lower(t)`.
    pub excess: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport<K> {
    pub monotone: bool,
    /// First violating pair in lexicographic `(lower, upper)` order.
    pub witness: Option<Violation<K>>,
    /// Largest `F_upper(t) - F_lower(t) - tol` over all pairs and points;
    /// nonpositive iff the family is monotone.
    pub worst_margin: f64,
    pub pairs_checked: usize,
}

/// Stochastic monotonicity scan over entries sorted by condition value.
///
/// `tolerance(lower, upper, t)` gives the slack allowed at each CDF point,
/// so the same scan serves exact laws and Monte Carlo estimates.
pub fn monotone_scan<K: Copy + Ord>(
    entries: &[(K, &DiscreteDistribution)],
    mut tolerance: impl FnMut(K, K, i64) -> f64,
) -> MonotonicityReport<K> {
    let mut witness = None;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut pairs_checked = 0;
    for (i, &(lower, d_lower)) in entries.iter().enumerate() {
        for &(upper, d_upper) in &entries[i + 1..] {
            debug_assert!(upper > lower, "entries must be sorted by key");
            pairs_checked += 1;
            let points = union_support(d_lower, d_upper);
            let f_lower = cdf_at(d_lower, &points);
            let f_upper = cdf_at(d_upper, &points);
            let mut pair_violation: Option<Violation<K>> = None;
            for ((&t, lo), up) in points.iter().zip(f_lower).zip(f_upper) {
                let tol = tolerance(lower, upper, t);
                let margin = up - lo - tol;
                worst_margin = worst_margin.max(margin);
                if margin > 0.0 && pair_violation.is_none_or(|v| up - lo > v.excess) {
                    pair_violation = Some(Violation {
                        lower,
                        upper,
                        t,
                        excess: up - lo,
                        tolerance: tol,
                    });
                }
            }
            if witness.is_none() {
                witness = pair_violation;
            }
        }
    }
    if pairs_checked == 0 {
        worst_margin = 0.0;
    }
    MonotonicityReport {
        monotone: witness.is_none(),
        witness,
        worst_margin,
        pairs_checked,
    }
}

/// Checks that `family[h1]` dominates `family[h0]` for every `h1 > h0`.
pub fn is_stochastically_monotone(family: &ConditionalFamily, tol: f64) -> MonotonicityReport<u32> {
    let entries: Vec<_> = family.iter().collect();
    monotone_scan(&entries, |_, _, _| tol)
}

/// Outcome of the transitivity check on one finite trivariate law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub y_mono_x: bool,
    pub z_mono_y: bool,
    /// `F_{Z|Y,X} = F_{Z|Y}` on every `(x, y)` cell with positive mass.
    pub z_indep_x_given_y: bool,
    pub z_mono_x: bool,
}

impl TransitivityReport {
    pub fn premises_hold(&self) -> bool {
        self.y_mono_x && self.z_mono_y && self.z_indep_x_given_y
    }

    /// The transitivity implication: premises imply the conclusion.
    pub fn consistent(&self) -> bool {
        !self.premises_hold() || self.z_mono_x
    }
}

fn conditional_laws<K: Ord + Copy>(
    cells: impl Iterator<Item = (K, i64, f64)>,
) -> Result<Vec<(K, DiscreteDistribution)>> {
    let mut grouped: BTreeMap<K, Vec<(i64, f64)>> = BTreeMap::new();
    for (k, v, p) in cells {
        if p > 0.0 {
            grouped.entry(k).or_default().push((v, p));
        }
    }
    grouped
        .into_iter()
        .map(|(k, w)| DiscreteDistribution::from_weights(w).map(|d| (k, d)))
        .collect()
}

fn scan_monotone<K: Ord + Copy>(laws: &[(K, DiscreteDistribution)], tol: f64) -> bool {
    let entries: Vec<_> = laws.iter().map(|(k, d)| (*k, d)).collect();
    monotone_scan(&entries, |_, _, _| tol).monotone
}

/// Evaluates the premises and conclusion of stochastic-monotonicity
/// transitivity on a finite joint law of `(X, Y, Z)`.
pub fn check_transitivity_instance(
    xyz: &[(i64, i64, i64, f64)],
    tol: f64,
) -> Result<TransitivityReport> {
    let total: f64 = xyz.iter().map(|a| a.3).sum();
    if xyz.iter().any(|a| !a.3.is_finite() || a.3 < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(
            "trivariate masses must be nonnegative and sum to 1".into(),
        ));
    }
    let y_given_x = conditional_laws(xyz.iter().map(|&(x, y, _, p)| (x, y, p)))?;
    let z_given_y = conditional_laws(xyz.iter().map(|&(_, y, z, p)| (y, z, p)))?;
    let z_given_x = conditional_laws(xyz.iter().map(|&(x, _, z, p)| (x, z, p)))?;
    let z_given_xy = conditional_laws(xyz.iter().map(|&(x, y, z, p)| ((y, x), z, p)))?;

    let by_y: BTreeMap<i64, &DiscreteDistribution> =
        z_given_y.iter().map(|(y, d)| (*y, d)).collect();
    let z_indep_x_given_y = z_given_xy.iter().all(|((y, _), d)| {
        let reference = by_y[y];
        dominates(d, reference, tol) && dominates(reference, d, tol)
    });

    Ok(TransitivityReport {
        y_mono_x: scan_monotone(&y_given_x, tol),
        z_mono_y: scan_monotone(&z_given_y, tol),
        z_indep_x_given_y,
        z_mono_x: scan_monotone(&z_given_x, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(atoms: &[(i64, f64)]) -> DiscreteDistribution {
        DiscreteDistribution::new(atoms.iter().copied()).unwrap()
    }

    /// Brute-force CDF comparison on a dense integer grid.
    fn dominates_oracle(x: &DiscreteDistribution, y: &DiscreteDistribution) -> bool {
        let lo = x.min().min(y.min()) - 1;
        let hi = x.max().max(y.max()) + 1;
        (lo..=hi).all(|t| {
            let fx: f64 = x.atoms().iter().filter(|a| a.0 <= t).map(|a| a.1).sum();
            let fy: f64 = y.atoms().iter().filter(|a| a.0 <= t).map(|a| a.1).sum();
            fx <= fy + 1e-12
        })
    }

    #[test]
    fn reflexive() {
        let x = d(&[(1, 0.2), (4, 0.3), (7, 0.5)]);
        assert!(dominates(&x, &x, 0.0));
    }

    #[test]
    fn shifted_point_masses() {
        let four = DiscreteDistribution::point_mass(4);
        let three = DiscreteDistribution::point_mass(3);
        assert!(dominates(&four, &three, EXACT_TOLERANCE));
        assert!(!dominates(&three, &four, EXACT_TOLERANCE));
    }

    #[test]
    fn crossing_cdfs() {
        let x = DiscreteDistribution::uniform(2, 3).unwrap();
        let y = d(&[(1, 0.5), (4, 0.5)]);
        // F_x = 0, .5, 1, 1 and F_y = .5, .5, .5, 1 on t = 1..4.
        assert!(!dominates_oracle(&x, &y));
        assert!(!dominates_oracle(&y, &x));
        assert!(!dominates(&x, &y, EXACT_TOLERANCE));
        assert!(!dominates(&y, &x, EXACT_TOLERANCE));
    }

    #[test]
    fn increasing_point_masses_are_monotone() {
        let f = ConditionalFamily::deterministic(&[1, 2, 3, 4]).unwrap();
        let r = is_stochastically_monotone(&f, EXACT_TOLERANCE);
        assert!(r.monotone);
        assert_eq!(r.pairs_checked, 6);
        assert!(r.worst_margin <= 0.0);
    }

    #[test]
    fn correlation_counterexample_family_is_not_monotone() {
        let f = ConditionalFamily::deterministic(&[1, 4, 1, 4]).unwrap();
        let r = is_stochastically_monotone(&f, EXACT_TOLERANCE);
        assert!(!r.monotone);
        let w = r.witness.unwrap();
        assert_eq!((w.lower, w.upper), (2, 3));
        assert_eq!(w.t, 1);
        assert_eq!(w.excess, 1.0);
    }

    #[test]
    fn expectation_counterexample_family_is_not_monotone() {
        let alpha = 5.0 / 8.0;
        let f = ConditionalFamily::new([
            (1, DiscreteDistribution::point_mass(1)),
            (2, DiscreteDistribution::point_mass(2)),
            (3, d(&[(3, alpha), (1, 1.0 - alpha)])),
        ])
        .unwrap();
        let r = is_stochastically_monotone(&f, EXACT_TOLERANCE);
        let w = r.witness.unwrap();
        assert_eq!((w.lower, w.upper, w.t), (2, 3, 1));
        assert!((w.excess - 0.375).abs() < 1e-15);
    }

    #[test]
    fn identity_chain_transitivity() {
        let xyz: Vec<_> = (1..=4).map(|v| (v, v, v, 0.25)).collect();
        let r = check_transitivity_instance(&xyz, EXACT_TOLERANCE).unwrap();
        assert!(r.y_mono_x && r.z_mono_y && r.z_indep_x_given_y && r.z_mono_x);
        assert!(r.consistent());
    }

    #[test]
    fn embedded_counterexample_breaks_first_premise() {
        let xyz: Vec<_> = [(1, 1), (2, 4), (3, 1), (4, 4)]
            .iter()
            .map(|&(h, a)| (h, a, a, 0.25))
            .collect();
        let r = check_transitivity_instance(&xyz, EXACT_TOLERANCE).unwrap();
        assert!(!r.y_mono_x);
        assert!(!r.premises_hold());
        assert!(!r.z_mono_x);
    }

    #[test]
    fn conditional_dependence_is_detected() {
        // Z depends on X beyond Y.
        let xyz = [(0, 0, 0, 0.25), (1, 0, 1, 0.25), (0, 1, 1, 0.25), (1, 1, 2, 0.25)];
        let r = check_transitivity_instance(&xyz, EXACT_TOLERANCE).unwrap();
        assert!(!r.z_indep_x_given_y);
    }
}
