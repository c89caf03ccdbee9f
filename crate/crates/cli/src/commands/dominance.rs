use std::fmt::Write;
use std::path::PathBuf;

use clap::Args;
use partial_paths::forwarding::{parse_run_spec, simulate_coupled_pair, verify_dominance_empirical, Policy};
use partial_paths::markov::{absorption_time_cdf, build_chain, mean_absorption_times, position_marginals};
use partial_paths::seed;
use rayon::prelude::*;

use crate::{CliError, Context};

const EXACT_TOL: f64 = 1e-9;
const POSITION_SLOTS: u64 = 200;

#[derive(Debug, Args)]
pub struct DominanceArgs {
    /// Run specification file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Initial route length (overrides the file).
    #[arg(long)]
    a1: Option<u32>,
    /// Simulated packets per policy (overrides the file).
    #[arg(long)]
    runs: Option<u64>,
    /// Fail when the alternate-route or wait family is not monotone.
    #[arg(long)]
    require_monotone: bool,
    /// Slots covered by the exact delivery-time CDF [default: 2000].
    #[arg(long)]
    exact_horizon: Option<u64>,
}

pub fn run(ctx: &Context, args: DominanceArgs) -> Result<(), CliError> {
    let f = &ctx.file.dominance;
    let path = args
        .model
        .or_else(|| f.model.clone())
        .ok_or_else(|| CliError::Usage("dominance needs --model <FILE>".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut spec = parse_run_spec(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Some(conv) = ctx.preset {
        spec.model = spec.model.with_convention(conv)?;
    }
    if let Some(a1) = args.a1.or(f.a1) {
        spec.a1 = a1;
    }
    if let Some(runs) = args.runs.or(f.runs) {
        spec.runs = runs;
    }
    if let Some(s) = ctx.seed_override {
        spec.seed = s;
    }
    let require_monotone = args.require_monotone || f.require_monotone.unwrap_or(false);
    let exact_horizon = args.exact_horizon.or(f.exact_horizon).unwrap_or(2000);
    let model = &spec.model;
    let a1 = spec.a1;
    if a1 == 0 || a1 > model.h_max() {
        return Err(CliError::Usage(format!("a1 = {a1} outside 1..={}", model.h_max())));
    }

    let check = verify_dominance_empirical(model, a1, spec.runs, spec.seed, spec.horizon)?;
    println!("# master_seed={} a1={a1} runs={} convention={}", spec.seed, spec.runs, model.convention());
    println!(
        "premise: alternate routes monotone: {}, waits monotone: {}",
        check.alt_monotone, check.wait_monotone
    );
    if !check.premise_holds() {
        println!("PREMISE FAILED: dominance is not predicted; margins below are diagnostics only");
    }

    let source = build_chain(model, Policy::Source)?;
    let intermediate = build_chain(model, Policy::Intermediate)?;
    let ps = position_marginals(&source, a1, POSITION_SLOTS)?;
    let pi = position_marginals(&intermediate, a1, POSITION_SLOTS)?;
    let mut position_margin = f64::NEG_INFINITY;
    for (a, b) in ps.iter().zip(&pi) {
        for t in 0..=i64::from(model.h_max()) {
            position_margin = position_margin.max(a.cdf(t) - b.cdf(t));
        }
    }
    let fs = absorption_time_cdf(&source, a1, exact_horizon)?;
    let fi = absorption_time_cdf(&intermediate, a1, exact_horizon)?;
    let (vs, vi) = (fs.cdf_values(), fi.cdf_values());
    let cdf_margin = vs.iter().zip(&vi).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    let exact_ok = position_margin <= EXACT_TOL && cdf_margin <= EXACT_TOL;
    println!(
        "exact: max F_S - F_I over positions (slots <= {POSITION_SLOTS}) {position_margin:.3e}, over delivery time (t <= {exact_horizon}) {cdf_margin:.3e}"
    );
    let means_s = mean_absorption_times(&source)?;
    let means_i = mean_absorption_times(&intermediate)?;
    println!(
        "exact mean delivery time from a1: source {:.6}, intermediate {:.6}",
        means_s[a1 as usize - 1],
        means_i[a1 as usize - 1]
    );
    println!(
        "empirical: max F_S - F_I = {:.4} at t = {} (bound {:.4}); censored runs: source {}, intermediate {}",
        check.max_violation,
        check.violation_at,
        check.bound(),
        check.source.censored,
        check.intermediate.censored
    );

    if ctx.out.is_some() {
        let header = format!("# master_seed={} a1={a1}\n", spec.seed);
        let mut cdf = format!("{header}t,F_source,F_intermediate\n");
        for (t, (a, b)) in vs.iter().zip(&vi).enumerate() {
            writeln!(cdf, "{t},{a},{b}").unwrap();
        }
        ctx.write("cdf.csv", &cdf)?;
        for (policy, means) in [(Policy::Source, &means_s), (Policy::Intermediate, &means_i)] {
            let mut csv = format!("{header}h,T_mean\n");
            for (h, v) in means.iter().enumerate() {
                writeln!(csv, "{},{v}", h + 1).unwrap();
            }
            ctx.write(&format!("means_{policy}.csv"), &csv)?;
        }
        let rows: Vec<String> = (0..spec.runs)
            .into_par_iter()
            .map(|i| {
                let (s, t) = simulate_coupled_pair(model, a1, seed::derive(spec.seed, i), spec.horizon)
                    .expect("validated model");
                [s, t]
                    .iter()
                    .map(|tr| format!("{i},{},{},{},{}\n", tr.policy, tr.delivered, tr.total_slots, tr.periods.len()))
                    .collect()
            })
            .collect();
        ctx.write("runs.csv", &format!("{header}run,policy,delivered,T,periods\n{}", rows.concat()))?;
    }

    if !check.premise_holds() {
        if require_monotone {
            return Err(CliError::CheckFailed("alternate-route or wait family is not monotone".into()));
        }
        return Ok(());
    }
    if !exact_ok {
        return Err(CliError::CheckFailed(format!(
            "exact dominance violated by {:.3e}",
            position_margin.max(cdf_margin)
        )));
    }
    if !check.within_bound() {
        return Err(CliError::CheckFailed(format!(
            "empirical violation {:.4} exceeds {:.4}",
            check.max_violation,
            check.bound()
        )));
    }
    println!("dominance holds");
    Ok(())
}
