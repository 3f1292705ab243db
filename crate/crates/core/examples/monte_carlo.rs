//! Sampling citation lists and checking the counted percentile curve
//! against the analytic one.

use double_rank::fit::{fit_loglog, FitRange};
use double_rank::lognormal::{LognormalParams, DEFAULT_GRID};
use double_rank::simulation::{
    max_relative_deviation, simulate_percentile_experiment, SimulationSpec,
};

fn main() -> double_rank::Result<()> {
    let world = LognormalParams::new(150_000.0, 1.7, 1.0)?;
    let actor = LognormalParams::new(2_000.0, 1.5, 0.9)?;
    let range = FitRange::new(20.0, 0.2)?;

    println!(
        "{:>4} {:>10} {:>10} {:>12}",
        "seed", "alpha", "analytic", "dev (x>=1)"
    );
    for seed in 1..=10 {
        for discretize in [false, true] {
            let spec = SimulationSpec {
                world,
                actor,
                seed,
                discretize,
            };
            let e = simulate_percentile_experiment(&spec, &DEFAULT_GRID)?;
            let sampled = fit_loglog(&e.empirical, range)?;
            let analytic = fit_loglog(&e.analytic, range)?;
            println!(
                "{:>4} {:>10.4} {:>10.4} {:>12.4}{}",
                seed,
                sampled.exponent,
                analytic.exponent,
                max_relative_deviation(&e.empirical, &e.analytic, 1.0),
                if discretize {
                    "  (whole citations)"
                } else {
                    ""
                }
            );
        }
    }
    Ok(())
}
