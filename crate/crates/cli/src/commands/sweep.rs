use clap::Args;
use partial_paths::connectivity::{classify_regime, phase_sweep, sweep_csv, RegimeThresholds, DEFAULT_TRIALS};

use crate::config::parse_grid;
use crate::{CliError, Context};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Nodes per topology [default: 100].
    #[arg(long)]
    n: Option<usize>,
    /// Transmission range [default: 1].
    #[arg(long)]
    r0: Option<f64>,
    /// Expected degrees, e.g. `1..24`, `2:20:2` or `1,5,12` [default: 1..24].
    #[arg(long)]
    degrees: Option<String>,
    /// Topologies per grid point [default: 1000].
    #[arg(long)]
    trials: Option<usize>,
}

pub fn run(ctx: &Context, args: SweepArgs) -> Result<(), CliError> {
    let f = &ctx.file.phase_sweep;
    let n = args.n.or(f.n).unwrap_or(100);
    let r0 = args.r0.or(f.r0).unwrap_or(1.0);
    let degrees = parse_grid(args.degrees.as_deref().or(f.degrees.as_deref()).unwrap_or("1..24"))?;
    let trials = args.trials.or(f.trials).unwrap_or(DEFAULT_TRIALS);

    let points = phase_sweep(n, r0, &degrees, trials, ctx.seed)?;
    let header = format!("# master_seed={} n={n} r0={r0} m={trials}\n", ctx.seed);
    let csv = format!("{header}{}", sweep_csv(&points));

    let th = RegimeThresholds::default();
    for p in &points {
        let regime = classify_regime(p.connectivity.mean, p.reachability.mean, th);
        let path = p.mean_path.map_or("-".to_string(), |e| format!("{:.3}", e.mean));
        eprintln!(
            "d={:<6} C={:.3} R={:.3} P={path} {regime}",
            p.degree, p.connectivity.mean, p.reachability.mean
        );
    }
    match ctx.write("phase_sweep.csv", &csv)? {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => print!("{csv}"),
    }
    Ok(())
}
