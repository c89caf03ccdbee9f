#![allow(dead_code)]

use partial_paths::distributions::{ConditionalFamily, DiscreteDistribution};
use partial_paths::forwarding::{ForwardingModel, SlotConvention};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn distribution(lo: i64, hi: i64, max_atoms: usize) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec((lo..=hi, 1u32..=100), 1..=max_atoms).prop_map(|atoms| {
        DiscreteDistribution::from_weights(atoms.into_iter().map(|(v, w)| (v, f64::from(w)))).unwrap()
    })
}

pub fn family(h_max: u32, lo: i64, hi: i64) -> impl Strategy<Value = ConditionalFamily> {
    prop::collection::vec(distribution(lo, hi, 3), h_max as usize)
        .prop_map(|laws| ConditionalFamily::new((1..).zip(laws)).unwrap())
}

/// Mixture over shared weights of values that rise with `h`, which makes
/// the family monotone by construction.
pub fn monotone_family(h_max: u32, lo: i64, hi: i64) -> impl Strategy<Value = ConditionalFamily> {
    (1usize..=3)
        .prop_flat_map(move |k| {
            (
                prop::collection::vec(1u32..=100, k),
                prop::collection::vec(
                    prop::collection::vec(lo..=hi, h_max as usize).prop_map(|mut v| {
                        v.sort_unstable();
                        v
                    }),
                    k,
                ),
            )
        })
        .prop_map(move |(weights, columns)| {
            ConditionalFamily::from_fn(h_max, |h| {
                DiscreteDistribution::from_weights(
                    weights
                        .iter()
                        .zip(&columns)
                        .map(|(&w, col)| (col[h as usize - 1], f64::from(w))),
                )
            })
            .unwrap()
        })
}

/// Alternate-route family that never exceeds `h`, monotone by
/// construction.
pub fn monotone_alt(h_max: u32) -> impl Strategy<Value = ConditionalFamily> {
    monotone_family(h_max, 1, h_max as i64)
}

pub fn convention() -> impl Strategy<Value = SlotConvention> {
    (0usize..3).prop_map(|i| SlotConvention::PRESETS[i].1)
}

/// Small model with arbitrary alternate and wait families plus a start
/// length.
pub fn model(max_h: u32) -> impl Strategy<Value = (ForwardingModel, u32)> {
    (1..=max_h)
        .prop_flat_map(|h_max| {
            (
                0.2f64..=1.0,
                family(h_max, 1, h_max as i64),
                prop::option::of(family(h_max, 0, 3)),
                convention(),
                1..=h_max,
            )
        })
        .prop_map(|(p, alt, wait, conv, a1)| (ForwardingModel::new(p, alt, wait, conv).unwrap(), a1))
}

/// Deterministic draws from a strategy.
pub fn draw<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

/// `A | h` uniform on `max(1, h - 1)..=h`.
pub fn step_down_family(h_max: u32) -> ConditionalFamily {
    ConditionalFamily::from_fn(h_max, |h| {
        DiscreteDistribution::uniform((h as i64 - 1).max(1), h as i64)
    })
    .unwrap()
}

/// `W | h` a point mass at `h - 1`.
pub fn lagged_wait(h_max: u32) -> ConditionalFamily {
    let values: Vec<i64> = (0..h_max as i64).collect();
    ConditionalFamily::deterministic(&values).unwrap()
}
