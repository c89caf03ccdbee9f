use clap::Args;
use partial_paths::hops::{
    distance_density_disk, estimate_hop_given_distance, study_csv, verify_conjecture, DistanceBins,
    DEFAULT_BINS, DEFAULT_PAIRS, DEFAULT_TOPOLOGIES,
};
use partial_paths::seed;

use crate::{CliError, Context};

#[derive(Debug, Args)]
pub struct HopdistArgs {
    /// Transmission range [default: 2].
    #[arg(long)]
    r0: Option<f64>,
    /// Nodes per unit area [default: 1.25].
    #[arg(long)]
    density: Option<f64>,
    /// Disk radius [default: 10].
    #[arg(long)]
    radius: Option<f64>,
    /// Equal-width distance bins over (0, 2R] [default: 40].
    #[arg(long)]
    bins: Option<usize>,
    /// Sampled topologies [default: 200].
    #[arg(long)]
    topologies: Option<usize>,
    /// Node pairs per topology [default: 500].
    #[arg(long)]
    pairs: Option<usize>,
    /// Point pairs for the binned distance law [default: 1000000].
    #[arg(long)]
    distance_samples: Option<u64>,
}

pub fn run(ctx: &Context, args: HopdistArgs) -> Result<(), CliError> {
    let f = &ctx.file.hopdist;
    let r0 = args.r0.or(f.r0).unwrap_or(2.0);
    let density = args.density.or(f.density).unwrap_or(1.25);
    let radius = args.radius.or(f.radius).unwrap_or(10.0);
    let bin_count = args.bins.or(f.bins).unwrap_or(DEFAULT_BINS);
    let topologies = args.topologies.or(f.topologies).unwrap_or(DEFAULT_TOPOLOGIES);
    let pairs = args.pairs.or(f.pairs).unwrap_or(DEFAULT_PAIRS);
    let samples = args.distance_samples.or(f.distance_samples).unwrap_or(1_000_000);

    let bins = DistanceBins::uniform(2.0 * radius, bin_count)?;
    let study = estimate_hop_given_distance(r0, density, radius, &bins, topologies, pairs, seed::derive(ctx.seed, 0))?;
    let f_d = distance_density_disk(radius, &bins, samples, seed::derive(ctx.seed, 1))?;
    let report = verify_conjecture(&study, &f_d)?;

    let header = format!(
        "# master_seed={} r0={r0} density={density} radius={radius} nodes={} topologies={topologies} pairs={pairs}\n",
        ctx.seed, study.nodes
    );
    let csv = format!("{header}{}", study_csv(&study));
    let json = report.to_json();
    println!(
        "{} connected pairs, {} disconnected pairs discarded",
        study.total(),
        study.discarded
    );
    if !report.low_confidence_bins.is_empty() {
        println!(
            "low-confidence bins (< 30 samples): {:?}",
            report.low_confidence_bins
        );
    }
    if !report.omitted_hops.is_empty() {
        eprintln!("warning: hop counts without distance mass omitted: {:?}", report.omitted_hops);
    }
    println!(
        "H | D monotone: {} (worst margin {:.4}); D | H monotone: {} (worst margin {:.4})",
        report.hop_given_distance.monotone,
        report.hop_given_distance.worst_margin,
        report.distance_given_hop.monotone,
        report.distance_given_hop.worst_margin
    );
    match (ctx.write("hopdist_study.csv", &csv)?, ctx.write("hopdist_report.json", &json)?) {
        (Some(a), Some(b)) => eprintln!("wrote {} and {}", a.display(), b.display()),
        _ => println!("{json}"),
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed("an estimated family is not stochastically monotone".into()))
    }
}
