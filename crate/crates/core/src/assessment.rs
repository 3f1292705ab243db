//! Quantities derived from fitted power laws: the likelihood of producing
//! the world's most cited paper, the percentile of prize-level work, and
//! performance ratios between two actors at a common percentile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{Estimate, PowerLawFit};

/// A common evaluation percentile for comparing actors (0.01%).
pub const EVALUATION_PERCENTILE_PRESET: f64 = 0.01;

/// Nobel Prize achievements per year credited to the USA, used as target
/// counts for locating the prize-level percentile.
pub mod nobel_rates {
    pub const USA_CHEMISTRY: f64 = 1.1;
    pub const USA_PHYSICS: f64 = 0.9;
    pub const USA_BIOLOGY: f64 = 0.9;
}

/// Percentile occupied by the single most cited of `world_paper_count`
/// papers.
pub fn rank1_percentile(world_paper_count: u64) -> Result<f64> {
    if world_paper_count == 0 {
        return Err(Error::Domain {
            what: "world paper count",
            value: 0.0,
        });
    }
    Ok(100.0 / world_paper_count as f64)
}

/// Expected actor papers at percentile `x`; below 1 this reads as the
/// likelihood of having a paper that selective.
pub fn likelihood_at(fit: &PowerLawFit, x: f64) -> Result<Estimate> {
    fit.estimate(x)
}

/// Percentile at which the actor is expected to produce `annual_count`
/// papers.
pub fn nobel_percentile(fit: &PowerLawFit, annual_count: f64) -> Result<f64> {
    fit.solve_percentile(annual_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRatio {
    pub percentile: f64,
    pub actor_value: f64,
    pub reference_value: f64,
    pub ratio: f64,
}

pub fn performance_ratio(
    actor: &PowerLawFit,
    reference: &PowerLawFit,
    x: f64,
) -> Result<PerformanceRatio> {
    let actor_value = actor.evaluate(x)?;
    let reference_value = reference.evaluate(x)?;
    if !(reference_value > 0.0) {
        return Err(Error::Domain {
            what: "reference value",
            value: reference_value,
        });
    }
    Ok(PerformanceRatio {
        percentile: x,
        actor_value,
        reference_value,
        ratio: actor_value / reference_value,
    })
}

/// Percentile where two power laws cross, if their exponents differ.
pub fn crossing_percentile(a: &PowerLawFit, b: &PowerLawFit) -> Option<f64> {
    let d = a.exponent - b.exponent;
    (d != 0.0).then(|| ((b.coefficient / a.coefficient).ln() / d).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentInput {
    pub actor_fit: PowerLawFit,
    pub reference_fit: Option<PowerLawFit>,
    pub world_paper_count: Option<u64>,
    pub annual_target_count: Option<f64>,
    /// Percentile for the likelihood and ratio; defaults to the prize-level
    /// percentile when an annual count is given.
    pub at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rank1Assessment {
    pub world_paper_count: u64,
    pub percentile: f64,
    pub actor_likelihood: Estimate,
    pub reference_likelihood: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub rank1: Option<Rank1Assessment>,
    pub nobel_percentile: Option<f64>,
    pub evaluation_percentile: Option<f64>,
    pub actor_estimate: Option<Estimate>,
    pub reference_estimate: Option<Estimate>,
    pub ratio: Option<PerformanceRatio>,
}

pub fn assess(input: &AssessmentInput) -> Result<AssessmentReport> {
    let actor = &input.actor_fit;
    let reference = input.reference_fit.as_ref();

    let rank1 = input
        .world_paper_count
        .map(|n| -> Result<Rank1Assessment> {
            let percentile = rank1_percentile(n)?;
            Ok(Rank1Assessment {
                world_paper_count: n,
                percentile,
                actor_likelihood: likelihood_at(actor, percentile)?,
                reference_likelihood: reference
                    .map(|r| likelihood_at(r, percentile))
                    .transpose()?,
            })
        })
        .transpose()?;

    let nobel = input
        .annual_target_count
        .map(|c| nobel_percentile(actor, c))
        .transpose()?;

    let evaluation = input.at.or(nobel);
    if rank1.is_none() && evaluation.is_none() {
        return Err(Error::UnsupportedCombination(
            "give a world paper count, an annual target count or an evaluation percentile",
        ));
    }
    let (actor_estimate, reference_estimate, ratio) = match evaluation {
        Some(x) => (
            Some(actor.estimate(x)?),
            reference.map(|r| r.estimate(x)).transpose()?,
            reference
                .map(|r| performance_ratio(actor, r, x))
                .transpose()?,
        ),
        None => (None, None, None),
    };
    Ok(AssessmentReport {
        rank1,
        nobel_percentile: nobel,
        evaluation_percentile: evaluation,
        actor_estimate,
        reference_estimate,
        ratio,
    })
}
