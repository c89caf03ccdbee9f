mod common;

use partial_paths::distributions::{
    check_transitivity_instance, dominates, is_stochastically_monotone, JointDistribution,
    EXACT_TOLERANCE,
};
use partial_paths::forwarding::{simulate_coupled_pair, simulate_packet, ForwardingModel, Policy};
use partial_paths::geo::{NetworkSnapshot, Point, Region};
use partial_paths::markov::{build_chain, mean_absorption_times, position_marginals};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn dominance_is_transitive(
        x in common::distribution(-5, 5, 4),
        y in common::distribution(-5, 5, 4),
        z in common::distribution(-5, 5, 4),
    ) {
        if dominates(&x, &y, EXACT_TOLERANCE) && dominates(&y, &z, EXACT_TOLERANCE) {
            prop_assert!(dominates(&x, &z, 2.0 * EXACT_TOLERANCE));
        }
    }

    #[test]
    fn dominance_orders_expectations(
        x in common::distribution(-5, 5, 4),
        y in common::distribution(-5, 5, 4),
    ) {
        if dominates(&x, &y, EXACT_TOLERANCE) {
            prop_assert!(x.expectation() >= y.expectation() - 1e-9);
        }
    }

    #[test]
    fn cdf_is_a_cdf(x in common::distribution(-20, 20, 6)) {
        let mut last = 0.0;
        for t in x.min() - 1..=x.max() {
            let f = x.cdf(t);
            prop_assert!(f >= last && f <= 1.0 + 1e-12);
            last = f;
        }
        prop_assert!((x.cdf(x.max()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constructed_families_are_monotone(f in common::monotone_family(5, -4, 4)) {
        prop_assert!(is_stochastically_monotone(&f, EXACT_TOLERANCE).monotone);
    }

    #[test]
    fn corollary_instances(
        x in common::distribution(1, 4, 4),
        y_given_x in common::family(4, 1, 4),
        z_given_y in common::family(4, -3, 3),
    ) {
        let xy = JointDistribution::from_conditional(&x, &y_given_x).unwrap();
        let mut xyz = Vec::new();
        for &(xv, yv, pxy) in xy.atoms() {
            for &(zv, pz) in z_given_y.get(yv as u32).unwrap().atoms() {
                xyz.push((xv, yv, zv, pxy * pz));
            }
        }
        let r = check_transitivity_instance(&xyz, 1e-9).unwrap();
        prop_assert!(r.z_indep_x_given_y);
        prop_assert!(r.consistent(), "{r:?}");
    }

    #[test]
    fn traces_are_valid(
        (m, a1) in common::model(5),
        seed in any::<u64>(),
        horizon in 1u64..300,
    ) {
        for policy in Policy::BOTH {
            let trace = simulate_packet(&m, policy, a1, seed, horizon).unwrap();
            prop_assert_eq!(trace.validate(), Ok(()));
            prop_assert!(trace.total_slots <= horizon);
        }
    }

    #[test]
    fn coupled_intermediate_never_later(
        alt in (1u32..=5).prop_flat_map(common::monotone_alt),
        p in 0.1f64..=1.0,
        conv in common::convention(),
        seed in any::<u64>(),
    ) {
        let h_max = alt.h_max();
        let m = ForwardingModel::new(p, alt, None, conv).unwrap();
        let (s, i) = simulate_coupled_pair(&m, h_max, seed, 1_000_000).unwrap();
        prop_assert!(s.delivered && i.delivered);
        prop_assert!(i.total_slots <= s.total_slots);
    }

    #[test]
    fn torus_distance_is_shift_invariant(
        pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 2..12),
        (dx, dy) in (0.0f64..10.0, 0.0f64..10.0),
    ) {
        let region = Region::torus(10.0).unwrap();
        let original: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let shifted: Vec<Point> = pts
            .iter()
            .map(|&(x, y)| Point::new((x + dx) % 10.0, (y + dy) % 10.0))
            .collect();
        for a in 0..original.len() {
            for b in 0..original.len() {
                let d0 = region.distance(original[a], original[b]);
                let d1 = region.distance(shifted[a], shifted[b]);
                prop_assert!((d0 - d1).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hop_counts_form_a_metric(
        pts in prop::collection::vec((0.0f64..6.0, 0.0f64..6.0), 2..25),
    ) {
        let positions = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let s = NetworkSnapshot::from_positions(Region::torus(6.0).unwrap(), 1.5, positions).unwrap();
        let all: Vec<_> = (0..s.len()).map(|u| s.hop_distances_from(u).unwrap()).collect();
        for u in 0..s.len() {
            prop_assert_eq!(all[u][u], Some(0));
            for v in 0..s.len() {
                prop_assert_eq!(all[u][v], all[v][u]);
                for w in 0..s.len() {
                    if let (Some(a), Some(b)) = (all[u][v], all[v][w]) {
                        prop_assert!(all[u][w].is_some_and(|c| c <= a + b));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn monotone_alt_gives_monotone_means(
        alt in (1u32..=5).prop_flat_map(common::monotone_alt),
        p in 0.05f64..=1.0,
        conv in common::convention(),
    ) {
        let m = ForwardingModel::new(p, alt, None, conv).unwrap();
        for policy in Policy::BOTH {
            let t = mean_absorption_times(&build_chain(&m, policy).unwrap()).unwrap();
            prop_assert!(t.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{policy}: {t:?}");
        }
    }

    #[test]
    fn position_marginals_stay_normalized((m, a1) in common::model(4)) {
        for policy in Policy::BOTH {
            let chain = build_chain(&m, policy).unwrap();
            for d in position_marginals(&chain, a1, 100).unwrap() {
                let total: f64 = d.atoms().iter().map(|a| a.1).sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
}
