//! Seeded synthetic citation lists drawn from lognormal parameters.
//!
//! Uniforms come from ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`):
//! the top 53 bits of each `u64` give `u = (k + 1/2) / 2^53`, strictly inside
//! `(0, 1)`. A citation count is `exp(mu + sigma z)` with
//! `z = sqrt(2) erf_inv(2u - 1)`, so the stream depends only on the seed.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::empirical::{build_curve, ActorSelector, CitationList, PaperRecord, TiePolicy};
use crate::error::{Error, Result};
use crate::lognormal::{analytic_curve, LognormalParams, PercentileCurve};
use crate::numerics::normal_quantile;

/// Label carried by sampled actor papers inside the world list.
pub const ACTOR_LABEL: &str = "actor";

/// Seeded stream of standard normal variates.
pub struct NormalStream {
    rng: ChaCha20Rng,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next_uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    pub fn next_normal(&mut self) -> f64 {
        normal_quantile(self.next_uniform()).expect("uniform is inside (0, 1)")
    }

    fn next_citation(&mut self, params: &LognormalParams, discretize: bool) -> f64 {
        let c = (params.mu + params.sigma * self.next_normal()).exp();
        if discretize {
            c.floor()
        } else {
            c
        }
    }
}

fn paper_count(params: &LognormalParams) -> Result<usize> {
    params.validate()?;
    let n = params.n_papers;
    if n < 1.0 || n.fract() != 0.0 || n > usize::MAX as f64 {
        return Err(Error::Domain {
            what: "sampled paper count (must be a positive integer)",
            value: n,
        });
    }
    Ok(n as usize)
}

/// `n_papers` draws of `exp(mu + sigma z)`, floored when `discretize` is set.
pub fn sample_citations(
    params: &LognormalParams,
    seed: u64,
    discretize: bool,
) -> Result<CitationList> {
    let n = paper_count(params)?;
    let mut stream = NormalStream::new(seed);
    CitationList::from_citations((0..n).map(|_| stream.next_citation(params, discretize)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub world: LognormalParams,
    pub actor: LognormalParams,
    pub seed: u64,
    pub discretize: bool,
}

impl SimulationSpec {
    pub fn validate(&self) -> Result<(usize, usize)> {
        let nw = paper_count(&self.world)?;
        let na = paper_count(&self.actor)?;
        if na > nw {
            return Err(Error::Domain {
                what: "actor paper count (exceeds world)",
                value: self.actor.n_papers,
            });
        }
        Ok((nw, na))
    }
}

/// A world list of `world.n_papers` records: the actor's papers, labelled
/// [`ACTOR_LABEL`], drawn from the actor parameters, followed by the rest of
/// the world drawn from the world parameters. All draws use one stream.
pub fn sample_world(spec: &SimulationSpec) -> Result<CitationList> {
    let (nw, na) = spec.validate()?;
    let mut stream = NormalStream::new(spec.seed);
    let mut records = Vec::with_capacity(nw);
    for i in 0..na {
        records.push(
            PaperRecord::new(stream.next_citation(&spec.actor, spec.discretize))
                .with_id(format!("a{i}"))
                .with_actor(ACTOR_LABEL),
        );
    }
    for i in na..nw {
        records.push(
            PaperRecord::new(stream.next_citation(&spec.world, spec.discretize))
                .with_id(format!("w{i}")),
        );
    }
    CitationList::new(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub empirical: PercentileCurve,
    pub analytic: PercentileCurve,
    /// Largest `|empirical - analytic| / analytic` over the grid.
    pub max_rel_dev: f64,
}

/// Samples a world containing the actor and compares the counted curve with
/// the analytic one on `grid`.
pub fn simulate_percentile_experiment(spec: &SimulationSpec, grid: &[f64]) -> Result<Experiment> {
    let world = sample_world(spec)?;
    let empirical = build_curve(
        &world,
        ActorSelector::Label(ACTOR_LABEL),
        grid,
        TiePolicy::Proportional,
    )?;
    let analytic = analytic_curve(grid, &spec.actor, &spec.world)?;
    let max_rel_dev = max_relative_deviation(&empirical, &analytic, 0.0);
    Ok(Experiment {
        empirical,
        analytic,
        max_rel_dev,
    })
}

/// Largest relative deviation over points with percentile `>= min_percentile`
/// and positive analytic count. Curves must share a grid.
pub fn max_relative_deviation(
    empirical: &PercentileCurve,
    analytic: &PercentileCurve,
    min_percentile: f64,
) -> f64 {
    empirical
        .points()
        .iter()
        .zip(analytic.points())
        .filter(|(_, a)| a.percentile >= min_percentile && a.count > 0.0)
        .map(|(e, a)| ((e.count - a.count) / a.count).abs())
        .fold(0.0, f64::max)
}
