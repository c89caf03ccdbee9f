use std::fmt::Write;

use clap::{Args, ValueEnum};
use partial_paths::distributions::{is_stochastically_monotone, DiscreteDistribution, JointDistribution, EXACT_TOLERANCE};
use partial_paths::forwarding::{Policy, SlotConvention};
use partial_paths::markov::{build_chain, counterexample_model, mean_absorption_times, CounterexampleSpec};

use crate::config::parse_grid;
use crate::{CliError, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// A | h = 1, 4, 1, 4.
    #[value(alias = "thm1")]
    Correlation,
    /// A_1 = 1, A_2 = 2, A_3 = 3 w.p. alpha else 1.
    #[value(alias = "thm2")]
    Expectation,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Alternate-route family [default: expectation].
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Single link-up probability.
    #[arg(long, conflicts_with = "p_grid")]
    p: Option<f64>,
    /// Grid of link-up probabilities, e.g. `0.05:0.95:0.05` [default].
    #[arg(long)]
    p_grid: Option<String>,
    /// Mass of the long alternate route for the expectation family [default: 0.625].
    #[arg(long)]
    alpha: Option<f64>,
}

fn spec(family: Family, p: f64, alpha: f64) -> CounterexampleSpec {
    match family {
        Family::Correlation => CounterexampleSpec::Correlation { p },
        Family::Expectation => CounterexampleSpec::Expectation { p, alpha },
    }
}

fn describe_family(s: CounterexampleSpec) -> Result<(), CliError> {
    let alt = s.alt_family()?;
    let means: Vec<String> = alt.iter().map(|(_, d)| format!("{}", d.expectation())).collect();
    println!("E[A_h] for h = 1..{}: ({})", alt.h_max(), means.join(", "));
    let report = is_stochastically_monotone(&alt, EXACT_TOLERANCE);
    match report.witness {
        Some(w) => println!(
            "A is not stochastically monotone in h: witness (h0={}, h1={}) at t={} (excess {:.4})",
            w.lower, w.upper, w.t, w.excess
        ),
        None => println!("A is stochastically monotone in h"),
    }
    let h = DiscreteDistribution::uniform(1, i64::from(alt.h_max()))?;
    match JointDistribution::from_conditional(&h, &alt)?.correlation() {
        Ok(rho) => println!("corr(H, A) with H uniform on 1..{}: {rho:.10}", alt.h_max()),
        Err(e) => println!("corr(H, A): {e}"),
    }
    Ok(())
}

pub fn run(ctx: &Context, args: CounterexampleArgs) -> Result<(), CliError> {
    let f = &ctx.file.counterexample;
    let family = match args.family {
        Some(fam) => fam,
        None => match f.family.as_deref() {
            Some(name) => Family::from_str(name, true).map_err(CliError::Usage)?,
            None => Family::Expectation,
        },
    };
    let alpha = args.alpha.or(f.alpha).unwrap_or(0.625);
    let grid = match (args.p, args.p_grid.as_deref()) {
        (Some(p), _) => vec![p],
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => match (f.p, f.p_grid.as_deref()) {
            (Some(p), _) => vec![p],
            (None, g) => parse_grid(g.unwrap_or("0.05:0.95:0.05"))?,
        },
    };
    if family == Family::Expectation && alpha <= 0.5 {
        eprintln!("warning: alpha = {alpha} <= 1/2, so E[A_h] is not increasing in h; the example loses its premise");
    }
    let presets: Vec<(&str, SlotConvention)> = match ctx.preset {
        Some(c) => vec![(c.preset_name().unwrap_or("custom"), c)],
        None => SlotConvention::PRESETS.to_vec(),
    };
    for &p in &grid {
        spec(family, p, alpha).validate()?;
    }
    let first = spec(family, grid[0], alpha);
    describe_family(first)?;
    println!("closed form changes sign at p = {:.12}", first.threshold());

    let mut delta_csv = String::from("p,closed_form");
    for (name, _) in &presets {
        write!(delta_csv, ",{name}").unwrap();
    }
    delta_csv.push('\n');
    let mut previous: Option<(f64, f64)> = None;
    for &p in &grid {
        let s = spec(family, p, alpha);
        let closed = s.delta()?;
        write!(delta_csv, "{p},{closed}").unwrap();
        println!("p = {p}: closed-form T2 - T3 = {closed:.6}");
        for &(name, conv) in &presets {
            let model = counterexample_model(s, conv)?;
            for policy in Policy::BOTH {
                let t = mean_absorption_times(&build_chain(&model, policy)?)?;
                let shown: Vec<String> = t.iter().map(|v| format!("{v:.6}")).collect();
                let dips: Vec<String> = t
                    .windows(2)
                    .enumerate()
                    .filter(|(_, w)| w[1] < w[0] - 1e-9)
                    .map(|(i, _)| format!("T{} < T{}", i + 2, i + 1))
                    .collect();
                println!(
                    "  {name:<6} {policy:<12} T = ({}){}",
                    shown.join(", "),
                    if dips.is_empty() { String::new() } else { format!("  [{}]", dips.join(", ")) }
                );
                if policy == Policy::Intermediate {
                    write!(delta_csv, ",{}", t[1] - t[2]).unwrap();
                }
                if grid.len() == 1 {
                    let mut csv = format!("# master_seed={} p={p} preset={name} policy={policy}\nh,T_mean\n", ctx.seed);
                    for (h, v) in t.iter().enumerate() {
                        writeln!(csv, "{},{v}", h + 1).unwrap();
                    }
                    ctx.write(&format!("T_{name}_{policy}.csv"), &csv)?;
                }
            }
        }
        delta_csv.push('\n');
        if let Some((p0, d0)) = previous {
            if (d0 > 0.0) != (closed > 0.0) {
                println!("closed form changes sign between p = {p0} and p = {p}");
            }
        }
        previous = Some((p, closed));
    }
    ctx.write("delta.csv", &delta_csv)?;
    Ok(())
}
