mod common;

use partial_paths::distributions::table::{parse_distribution, parse_family, write_distribution, write_family};
use partial_paths::forwarding::{parse_run_spec, write_run_spec, RunSpec};
use partial_paths::geo::text::{parse_snapshot, write_snapshot};
use partial_paths::geo::{sample_topology, Region};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn distribution_round_trip(d in common::distribution(-1000, 1000, 8)) {
        prop_assert_eq!(parse_distribution(&write_distribution(&d)).unwrap(), d);
    }

    #[test]
    fn family_round_trip(f in (1u32..6).prop_flat_map(|h| common::family(h, -9, 9))) {
        prop_assert_eq!(parse_family(&write_family(&f)).unwrap(), f);
    }

    #[test]
    fn snapshot_round_trip(n in 1usize..40, side in 0.5f64..20.0, seed in any::<u64>(), kind in 0u8..3) {
        let region = match kind {
            0 => Region::torus(side).unwrap(),
            1 => Region::disk(side).unwrap(),
            _ => Region::rectangle(side, side / 2.0).unwrap(),
        };
        let s = sample_topology(n, region, 1.0, seed).unwrap();
        prop_assert_eq!(parse_snapshot(&write_snapshot(&s)).unwrap(), s);
    }

    #[test]
    fn run_spec_round_trip(
        (model, a1) in common::model(4),
        runs in 1u64..100_000,
        seed in any::<u64>(),
        policy in prop::option::of(0usize..2),
    ) {
        let spec = RunSpec {
            model,
            policy: policy.map(|i| partial_paths::forwarding::Policy::BOTH[i]),
            a1,
            runs,
            seed,
            horizon: 1000,
        };
        prop_assert_eq!(parse_run_spec(&write_run_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn parsers_never_panic(input in "[ -~\n]{0,200}") {
        let _ = parse_distribution(&input);
        let _ = parse_family(&input);
        let _ = parse_snapshot(&input);
        let _ = parse_run_spec(&input);
    }
}

#[test]
fn fuzz_seeds_parse() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus");
    let parsers: [(&str, fn(&str) -> bool); 4] = [
        ("parse_distribution", |s| parse_distribution(s).is_ok()),
        ("parse_family", |s| parse_family(s).is_ok()),
        ("parse_run_spec", |s| parse_run_spec(s).is_ok()),
        ("parse_snapshot", |s| parse_snapshot(s).is_ok()),
    ];
    for (dir, parse) in parsers {
        let mut seen = 0;
        for entry in std::fs::read_dir(root.join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(parse(&text), "{}", path.display());
            seen += 1;
        }
        assert!(seen > 0, "{dir} has no seeds");
    }
}
