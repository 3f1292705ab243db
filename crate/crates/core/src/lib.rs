//! Percentile-based analysis of citation distributions: lognormal models,
//! empirical percentile counting with ties, power-law fits, extension of
//! ranking indicators and assessment of very-high-impact research.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assessment;
pub mod cli;
pub mod empirical;
pub mod error;
pub mod fit;
pub mod io;
pub mod leiden;
pub mod lognormal;
pub mod numerics;
pub mod simulation;

pub use error::{Error, Result};
