//! Continuous lognormal citation model and the analytic percentile curves
//! it implies.
//!
//! For a world with parameters `(N_w, mu_w, sigma_w)` the citation threshold
//! of the top `x%` is `c0 = exp(mu_w - sqrt(2) sigma_w erf_inv(2x/100 - 1))`,
//! and an actor `(N, mu, sigma)` has `N/2 [1 + erf((mu - ln c0) / (sqrt(2) sigma))]`
//! papers above it. Both are evaluated here through `erfc`/`erfc_inv`, which
//! is the same expression without cancellation at small `x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{erfc, erfc_inv};

/// The twelve percentiles recorded for every empirical curve.
pub const DEFAULT_GRID: [f64; 12] = [
    100.0, 50.0, 30.0, 20.0, 10.0, 8.0, 5.0, 3.0, 2.0, 1.0, 0.5, 0.2,
];

/// `(N, mu, sigma)` of a lognormal citation distribution. `n_papers` is real
/// so that fractional counts are representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LognormalParams {
    pub n_papers: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl LognormalParams {
    pub fn new(n_papers: f64, mu: f64, sigma: f64) -> Result<Self> {
        let params = Self {
            n_papers,
            mu,
            sigma,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_papers > 0.0 && self.n_papers.is_finite()) {
            return Err(Error::Domain {
                what: "n_papers",
                value: self.n_papers,
            });
        }
        if !self.mu.is_finite() {
            return Err(Error::Domain {
                what: "mu",
                value: self.mu,
            });
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Domain {
                what: "sigma",
                value: self.sigma,
            });
        }
        Ok(())
    }
}

/// A world percentile `x` in `(0, 100]`; smaller is more selective.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Percent(f64);

impl Percent {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 100.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                what: "percentile",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_whole(self) -> bool {
        self.0 == 100.0
    }
}

impl TryFrom<f64> for Percent {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Percent> for f64 {
    fn from(p: Percent) -> f64 {
        p.0
    }
}

/// Citations needed to enter a world percentile.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CitationThreshold(f64);

impl CitationThreshold {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub percentile: f64,
    pub count: f64,
}

/// Paper counts per world percentile, ordered from the least to the most
/// selective percentile.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PercentileCurve {
    points: Vec<CurvePoint>,
}

impl PercentileCurve {
    /// Checks that percentiles are in `(0, 100]` and strictly decreasing and
    /// that counts are finite, nonnegative and nonincreasing.
    pub fn new(points: Vec<CurvePoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            Percent::new(p.percentile)?;
            if !(p.count >= 0.0 && p.count.is_finite()) {
                return Err(Error::Domain {
                    what: "curve count",
                    value: p.count,
                });
            }
            if i > 0 {
                let prev = &points[i - 1];
                if p.percentile >= prev.percentile {
                    return Err(Error::InvalidGrid(format!(
                        "percentiles must strictly decrease ({} then {})",
                        prev.percentile, p.percentile
                    )));
                }
                if p.count > prev.count {
                    return Err(Error::InvalidGrid(format!(
                        "count increases from {} at {}% to {} at {}%",
                        prev.count, prev.percentile, p.count, p.percentile
                    )));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(percentile, count)| CurvePoint { percentile, count })
                .collect(),
        )
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn percentiles(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.percentile)
    }

    pub fn counts(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.count)
    }

    pub fn count_at(&self, percentile: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.percentile == percentile)
            .map(|p| p.count)
    }
}

/// Checks a percentile grid: nonempty, strictly decreasing, inside `(0, 100]`.
pub fn validate_grid(grid: &[f64]) -> Result<Vec<Percent>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let mut out = Vec::with_capacity(grid.len());
    for (i, &x) in grid.iter().enumerate() {
        let p = Percent::new(x)
            .map_err(|_| Error::InvalidGrid(format!("percentile {x} outside (0, 100]")))?;
        if i > 0 && x >= grid[i - 1] {
            return Err(Error::InvalidGrid(format!(
                "grid must be strictly decreasing ({} then {x})",
                grid[i - 1]
            )));
        }
        out.push(p);
    }
    Ok(out)
}

/// Papers per unit citation at `c`.
pub fn density(c: f64, params: &LognormalParams) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain {
            what: "citation count",
            value: c,
        });
    }
    let z = (c.ln() - params.mu) / params.sigma;
    Ok(
        params.n_papers / (c * params.sigma * (2.0 * std::f64::consts::PI).sqrt())
            * (-0.5 * z * z).exp(),
    )
}

/// `ln c0` for the top `x%` of the world; `-inf` at `x = 100`.
pub fn log_citation_threshold(x: Percent, world: &LognormalParams) -> f64 {
    if x.is_whole() {
        return f64::NEG_INFINITY;
    }
    // erf_inv(2x/100 - 1) = -erfc_inv(2x/100); 2x/100 is in (0, 2)
    let q = erfc_inv(2.0 * x.value() / 100.0).expect("x in (0, 100)");
    world.mu + std::f64::consts::SQRT_2 * world.sigma * q
}

pub fn citation_threshold(x: Percent, world: &LognormalParams) -> CitationThreshold {
    CitationThreshold(log_citation_threshold(x, world).exp())
}

/// Expected number of actor papers in the world top `x%`.
pub fn papers_in_top(x: Percent, actor: &LognormalParams, world: &LognormalParams) -> f64 {
    if x.is_whole() {
        return actor.n_papers;
    }
    let ln_c0 = log_citation_threshold(x, world);
    0.5 * actor.n_papers * erfc((ln_c0 - actor.mu) / (std::f64::consts::SQRT_2 * actor.sigma))
}

pub fn analytic_curve(
    grid: &[f64],
    actor: &LognormalParams,
    world: &LognormalParams,
) -> Result<PercentileCurve> {
    actor.validate()?;
    world.validate()?;
    let grid = validate_grid(grid)?;
    PercentileCurve::new(
        grid.into_iter()
            .map(|x| CurvePoint {
                percentile: x.value(),
                count: papers_in_top(x, actor, world),
            })
            .collect(),
    )
}

/// `n` log-spaced percentiles from `high` down to `low`, both included.
pub fn log_spaced_grid(high: f64, low: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid("need at least two points".into()));
    }
    let (lh, ll) = (high.log10(), low.log10());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(lh + (ll - lh) * i as f64 / (n - 1) as f64))
        .collect();
    grid[0] = high;
    grid[n - 1] = low;
    validate_grid(&grid)?;
    Ok(grid)
}
