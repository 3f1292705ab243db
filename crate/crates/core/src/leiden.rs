//! Power laws from published percentile indicators, and the more selective
//! indicators they imply.
//!
//! Rankings publish `P`, `P_top50%`, `P_top10%` and `P_top1%`. Since
//! `N(x) = A x^alpha`, the last two alone fix the law: `A = P_top1%` and
//! `alpha = lg P_top10% - lg P_top1%`. With all four, a log-log regression
//! gives a fit whose R² measures how well the indicators follow a power law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_loglog, FitMethod, FitRange, PowerLawFit};
use crate::lognormal::PercentileCurve;

/// Targets of the usual extension: `P_top0.1%`, `P_top0.01%`, `P_top0.001%`.
pub const DEFAULT_TARGETS: [f64; 3] = [0.1, 0.01, 0.001];

/// One ranking entry. `p_total` and `p_top50` are optional because many
/// published tables only carry the top-10% and top-1% indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRow {
    pub name: String,
    pub field: Option<String>,
    pub period: Option<String>,
    pub p_total: Option<f64>,
    pub p_top50: Option<f64>,
    pub p_top10: f64,
    pub p_top1: f64,
}

impl IndicatorRow {
    pub fn new(name: impl Into<String>, p_top10: f64, p_top1: f64) -> Self {
        Self {
            name: name.into(),
            field: None,
            period: None,
            p_total: None,
            p_top50: None,
            p_top10,
            p_top1,
        }
    }

    pub fn with_totals(mut self, p_total: f64, p_top50: f64) -> Self {
        self.p_total = Some(p_total);
        self.p_top50 = Some(p_top50);
        self
    }

    /// Checks positivity and `P >= P_top50% >= P_top10% >= P_top1%` over the
    /// indicators that are present.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidIndicators {
            name: self.name.clone(),
            reason,
        };
        let chain: Vec<(&str, f64)> = [
            ("P", self.p_total),
            ("P_top50%", self.p_top50),
            ("P_top10%", Some(self.p_top10)),
            ("P_top1%", Some(self.p_top1)),
        ]
        .into_iter()
        .filter_map(|(n, v)| v.map(|v| (n, v)))
        .collect();
        for &(n, v) in &chain {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{n} must be positive, got {v}")));
            }
        }
        for w in chain.windows(2) {
            if w[0].1 < w[1].1 {
                return Err(invalid(format!(
                    "{} = {} is below {} = {}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMethod {
    #[default]
    ClosedForm,
    Regression,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub target: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedRow {
    pub base: IndicatorRow,
    pub fit: PowerLawFit,
    pub extended: Vec<Extension>,
}

/// The power law through `(10, p_top10)` and `(1, p_top1)`.
pub fn closed_form_fit(p_top10: f64, p_top1: f64) -> Result<PowerLawFit> {
    IndicatorRow::new("", p_top10, p_top1).validate()?;
    let exponent = p_top10.log10() - p_top1.log10();
    let r2 = (exponent != 0.0).then_some(1.0);
    Ok(PowerLawFit {
        method: FitMethod::ClosedForm,
        range: Some(FitRange {
            high: 10.0,
            low: 1.0,
        }),
        coefficient: p_top1,
        exponent,
        r2_log: r2,
        r2_linear: r2,
        n_points: 2,
        excluded_zero_count: 0,
        iterations: None,
    })
}

/// Log-log least squares through the four published indicators.
pub fn regression_fit(row: &IndicatorRow) -> Result<PowerLawFit> {
    row.validate()?;
    let (Some(p), Some(p50)) = (row.p_total, row.p_top50) else {
        return Err(Error::InvalidIndicators {
            name: row.name.clone(),
            reason: "regression needs P and P_top50%".into(),
        });
    };
    let curve = PercentileCurve::from_pairs([
        (100.0, p),
        (50.0, p50),
        (10.0, row.p_top10),
        (1.0, row.p_top1),
    ])?;
    fit_loglog(&curve, FitRange::new(100.0, 1.0)?)
}

pub fn extend(fit: &PowerLawFit, targets: &[f64]) -> Result<Vec<Extension>> {
    targets
        .iter()
        .map(|&target| {
            Ok(Extension {
                target,
                value: fit.evaluate(target)?,
            })
        })
        .collect()
}

pub fn extend_row(
    row: &IndicatorRow,
    targets: &[f64],
    method: ExtensionMethod,
) -> Result<ExtendedRow> {
    row.validate()?;
    let fit = match method {
        ExtensionMethod::ClosedForm => closed_form_fit(row.p_top10, row.p_top1)?,
        ExtensionMethod::Regression => regression_fit(row)?,
    };
    Ok(ExtendedRow {
        base: row.clone(),
        extended: extend(&fit, targets)?,
        fit,
    })
}

/// Extends every row independently. The output has one entry per input row,
/// in input order; invalid rows yield their error.
pub fn extend_batch(
    rows: &[IndicatorRow],
    targets: &[f64],
    method: ExtensionMethod,
) -> Vec<Result<ExtendedRow>> {
    rows.iter()
        .map(|row| extend_row(row, targets, method))
        .collect()
}
