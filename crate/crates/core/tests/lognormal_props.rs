mod common;

use double_rank::lognormal::{
    analytic_curve, citation_threshold, density, log_spaced_grid, papers_in_top, validate_grid,
    LognormalParams, Percent, DEFAULT_GRID,
};
use proptest::prelude::*;

fn params(n: f64, mu: f64, sigma: f64) -> LognormalParams {
    LognormalParams::new(n, mu, sigma).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn density_matches_closed_form() {
    let p = params(150_000.0, 1.7, 1.0);
    for c in [0.01, 0.5, 1.0, 5.47, 30.0, 1e4] {
        let want = common::lognormal_pdf(c, 150_000.0, 1.7, 1.0);
        assert!(rel(density(c, &p).unwrap(), want) < 1e-14);
    }
}

#[test]
fn normalization_over_the_parameter_grid() {
    for mu in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        for sigma in [0.8, 0.9, 1.0, 1.2, 1.4] {
            let total = common::papers_above(0.0, 1000.0, mu, sigma);
            assert!(
                rel(total, 1000.0) < 1e-6,
                "mu={mu} sigma={sigma} total={total}"
            );
        }
    }
}

#[test]
fn threshold_round_trip_over_the_parameter_grid() {
    for mu in [0.5, 1.7, 3.0] {
        for sigma in [0.8, 1.0, 1.4] {
            let world = params(150_000.0, mu, sigma);
            for x in [50.0, 10.0, 1.0, 0.2] {
                let c0 = citation_threshold(Percent::new(x).unwrap(), &world).value();
                let above = common::papers_above(c0, 150_000.0, mu, sigma);
                let want = x * 150_000.0 / 100.0;
                assert!(rel(above, want) < 1e-6, "mu={mu} sigma={sigma} x={x}");
            }
        }
    }
}

#[test]
fn actor_count_matches_quadrature() {
    let world = params(150_000.0, 1.7, 1.0);
    let actor = params(500.0, 1.5, 0.9);
    for x in DEFAULT_GRID {
        let c0 = citation_threshold(Percent::new(x).unwrap(), &world).value();
        let want = common::papers_above(c0, 500.0, 1.5, 0.9);
        let got = papers_in_top(Percent::new(x).unwrap(), &actor, &world);
        assert!(rel(got, want) < 1e-6, "x={x}");
    }
}

#[test]
fn grid_validation() {
    assert!(validate_grid(&DEFAULT_GRID).is_ok());
    assert!(validate_grid(&[]).is_err());
    assert!(validate_grid(&[10.0, 10.0]).is_err());
    assert!(validate_grid(&[0.0]).is_err());
    assert!(validate_grid(&[101.0, 50.0]).is_err());
    let g = log_spaced_grid(100.0, 0.2, 50).unwrap();
    assert_eq!(g.len(), 50);
    assert!(validate_grid(&g).is_ok());
}

proptest! {
    #[test]
    fn same_parameters_give_proportional_counts(
        n_a in 1.0f64..1e5, mu in 0.5f64..3.0, sigma in 0.5f64..1.5, x in 0.001f64..100.0,
    ) {
        let world = params(1e6, mu, sigma);
        let actor = params(n_a, mu, sigma);
        let got = papers_in_top(Percent::new(x).unwrap(), &actor, &world);
        prop_assert!(rel(got, n_a * x / 100.0) < 1e-9);
    }

    #[test]
    fn curve_is_monotone_and_bounded(
        n_a in 1.0f64..1e4, mu in 0.5f64..3.0, sigma in 0.5f64..1.5,
        mu_w in 0.5f64..3.0, sigma_w in 0.5f64..1.5,
    ) {
        let world = params(1e6, mu_w, sigma_w);
        let actor = params(n_a, mu, sigma);
        let curve = analytic_curve(&DEFAULT_GRID, &actor, &world).unwrap();
        prop_assert_eq!(curve.points()[0].count, n_a);
        for w in curve.points().windows(2) {
            prop_assert!(w[1].count <= w[0].count);
            prop_assert!(w[1].count >= 0.0);
        }
    }

    #[test]
    fn threshold_decreases_with_percentile(mu in 0.5f64..3.0, sigma in 0.5f64..1.5, a in 0.01f64..50.0, d in 0.01f64..49.0) {
        let world = params(1e5, mu, sigma);
        let hi = citation_threshold(Percent::new(a).unwrap(), &world).value();
        let lo = citation_threshold(Percent::new(a + d).unwrap(), &world).value();
        prop_assert!(hi > lo);
    }

    #[test]
    fn higher_mean_gains_share_at_the_top(mu_w in 0.5f64..2.5, gap in 0.05f64..1.0, sigma in 0.6f64..1.4) {
        let world = params(1e6, mu_w, sigma);
        let actor = params(1000.0, mu_w + gap, sigma);
        let top = papers_in_top(Percent::new(0.1).unwrap(), &actor, &world) / (1000.0 * 0.001);
        let mid = papers_in_top(Percent::new(10.0).unwrap(), &actor, &world) / (1000.0 * 0.1);
        prop_assert!(top > mid && mid > 1.0);
    }
}
