//! Percentile curves implied by lognormal citation distributions.
//!
//! Two simulated institutions are compared against a world of 150,000
//! papers: a large one whose papers are cited like the world's, and a
//! smaller, less cited one. The larger one leads at broad percentiles; the
//! smaller one's curve falls faster.

use double_rank::assessment::crossing_percentile;
use double_rank::fit::{fit_nonlinear, FitRange};
use double_rank::lognormal::{
    analytic_curve, citation_threshold, LognormalParams, Percent, DEFAULT_GRID,
};

fn main() -> double_rank::Result<()> {
    let world = LognormalParams::new(150_000.0, 1.7, 1.0)?;
    let like_world = LognormalParams::new(100.0, 1.7, 1.0)?;
    let lower = LognormalParams::new(500.0, 1.5, 0.9)?;

    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "x (%)", "threshold", "like world", "lower mean"
    );
    let a = analytic_curve(&DEFAULT_GRID, &like_world, &world)?;
    let b = analytic_curve(&DEFAULT_GRID, &lower, &world)?;
    for (pa, pb) in a.points().iter().zip(b.points()) {
        let c0 = citation_threshold(Percent::new(pa.percentile)?, &world);
        println!(
            "{:>8} {:>12.3} {:>12.4} {:>12.4}",
            pa.percentile,
            c0.value(),
            pa.count,
            pb.count
        );
    }

    let fa = fit_nonlinear(&a, FitRange::full())?;
    let fb = fit_nonlinear(&b, FitRange::full())?;
    println!(
        "\nlike world: N = {:.3} x^{:.3}",
        fa.coefficient, fa.exponent
    );
    println!("lower mean: N = {:.3} x^{:.3}", fb.coefficient, fb.exponent);
    if let Some(x) = crossing_percentile(&fa, &fb) {
        println!("curves cross at x = {x:.3}%");
    }
    Ok(())
}
