//! Power-law fits `N(x) = A x^alpha` to percentile curves.
//!
//! Two estimators are provided: ordinary least squares on `(lg x, lg N)`
//! and Gauss-Newton least squares on the untransformed counts. Both report
//! R² in log and linear space, since the two are not interchangeable when
//! comparing fits over different ranges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognormal::PercentileCurve;

const NONLINEAR_TOLERANCE: f64 = 1e-10;
const NONLINEAR_MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    /// Least squares on lg-transformed percentiles and counts.
    LogLogLeastSquares,
    /// Least squares on the raw counts.
    NonlinearLeastSquares,
    /// Two-point interpolation through `P_top10%` and `P_top1%`.
    ClosedForm,
    /// Parameters given directly rather than estimated.
    Supplied,
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::LogLogLeastSquares => "log_log_least_squares",
            Self::NonlinearLeastSquares => "nonlinear_least_squares",
            Self::ClosedForm => "closed_form",
            Self::Supplied => "supplied",
        })
    }
}

/// Inclusive percentile interval `[low, high]`, written `high:low`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRange {
    pub high: f64,
    pub low: f64,
}

impl FitRange {
    pub fn new(high: f64, low: f64) -> Result<Self> {
        if low > 0.0 && low < high && high <= 100.0 {
            Ok(Self { high, low })
        } else {
            Err(Error::InvalidRange { high, low })
        }
    }

    /// The whole percentile axis.
    pub fn full() -> Self {
        Self {
            high: 100.0,
            low: f64::MIN_POSITIVE,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.low && x <= self.high
    }
}

impl std::str::FromStr for FitRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRange {
            high: f64::NAN,
            low: f64::NAN,
        };
        let (high, low) = s.split_once(':').ok_or_else(bad)?;
        let high: f64 = high.trim().parse().map_err(|_| bad())?;
        let low: f64 = low.trim().parse().map_err(|_| bad())?;
        Self::new(high, low)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R2Space {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub method: FitMethod,
    pub range: Option<FitRange>,
    pub coefficient: f64,
    pub exponent: f64,
    pub r2_log: Option<f64>,
    pub r2_linear: Option<f64>,
    pub n_points: usize,
    #[serde(default)]
    pub excluded_zero_count: usize,
    #[serde(default)]
    pub iterations: Option<usize>,
}

/// A fitted value together with whether it lies below the fitted range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub extrapolated: bool,
}

impl PowerLawFit {
    /// Wraps given parameters, e.g. values copied from a publication.
    pub fn supplied(coefficient: f64, exponent: f64) -> Result<Self> {
        check_parameters(coefficient, exponent)?;
        Ok(Self {
            method: FitMethod::Supplied,
            range: None,
            coefficient,
            exponent,
            r2_log: None,
            r2_linear: None,
            n_points: 0,
            excluded_zero_count: 0,
            iterations: None,
        })
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain {
                what: "evaluation percentile",
                value: x,
            });
        }
        Ok(self.coefficient * x.powf(self.exponent))
    }

    pub fn is_extrapolation(&self, x: f64) -> bool {
        self.range.is_some_and(|r| x < r.low)
    }

    pub fn estimate(&self, x: f64) -> Result<Estimate> {
        Ok(Estimate {
            value: self.evaluate(x)?,
            extrapolated: self.is_extrapolation(x),
        })
    }

    /// Percentile at which the law predicts `target` papers.
    pub fn solve_percentile(&self, target: f64) -> Result<f64> {
        if !(target > 0.0 && target.is_finite()) {
            return Err(Error::Domain {
                what: "target count",
                value: target,
            });
        }
        if self.exponent == 0.0 {
            return Err(Error::ZeroExponent);
        }
        Ok(((target / self.coefficient).ln() / self.exponent).exp())
    }
}

fn check_parameters(coefficient: f64, exponent: f64) -> Result<()> {
    if !(coefficient > 0.0 && coefficient.is_finite()) {
        return Err(Error::Domain {
            what: "coefficient",
            value: coefficient,
        });
    }
    if !exponent.is_finite() {
        return Err(Error::Domain {
            what: "exponent",
            value: exponent,
        });
    }
    Ok(())
}

/// `1 - SS_res / SS_tot` of `points` against `A x^alpha`, on lg values in
/// log space.
pub fn r_squared(points: &[(f64, f64)], fit: &PowerLawFit, space: R2Space) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: points.len(),
        });
    }
    let mut pairs = Vec::with_capacity(points.len());
    for &(x, y) in points {
        let predicted = fit.evaluate(x)?;
        match space {
            R2Space::Linear => pairs.push((y, predicted)),
            R2Space::Log => {
                if !(y > 0.0) {
                    return Err(Error::Domain {
                        what: "observed count in log space",
                        value: y,
                    });
                }
                pairs.push((y.log10(), predicted.log10()));
            }
        }
    }
    let mean = pairs.iter().map(|p| p.0).sum::<f64>() / pairs.len() as f64;
    let ss_tot: f64 = pairs.iter().map(|p| (p.0 - mean).powi(2)).sum();
    if !(ss_tot > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let ss_res: f64 = pairs.iter().map(|p| (p.0 - p.1).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

fn in_range(curve: &PercentileCurve, range: &FitRange) -> Vec<(f64, f64)> {
    curve
        .points()
        .iter()
        .filter(|p| range.contains(p.percentile))
        .map(|p| (p.percentile, p.count))
        .collect()
}

fn attach_diagnostics(fit: &mut PowerLawFit, points: &[(f64, f64)]) {
    let positive: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > 0.0).collect();
    fit.r2_log = r_squared(&positive, fit, R2Space::Log).ok();
    fit.r2_linear = r_squared(points, fit, R2Space::Linear).ok();
}

/// Intercept and slope of the ordinary least-squares line through `(u, v)`.
pub(crate) fn least_squares_line(pairs: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = pairs.len() as f64;
    let mu = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut suu, mut suv) = (0.0, 0.0);
    for &(u, v) in pairs {
        suu += (u - mu) * (u - mu);
        suv += (u - mu) * (v - mv);
    }
    if !(suu > 0.0) {
        return Err(Error::DegenerateAbscissa);
    }
    let slope = suv / suu;
    Ok((mv - slope * mu, slope))
}

/// Least squares of `lg N` on `lg x` over the points inside `range`.
/// Points with zero count are skipped and counted in `excluded_zero_count`.
pub fn fit_loglog(curve: &PercentileCurve, range: FitRange) -> Result<PowerLawFit> {
    let points = in_range(curve, &range);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(x, y)| (x.log10(), y.log10()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: logs.len(),
        });
    }
    let (intercept, slope) = least_squares_line(&logs)?;
    let mut fit = PowerLawFit {
        method: FitMethod::LogLogLeastSquares,
        range: Some(range),
        coefficient: 10f64.powf(intercept),
        exponent: slope,
        r2_log: None,
        r2_linear: None,
        n_points: logs.len(),
        excluded_zero_count: points.len() - logs.len(),
        iterations: None,
    };
    attach_diagnostics(&mut fit, &points);
    Ok(fit)
}

/// Minimizes `sum (N_i - A x_i^alpha)^2` over the points inside `range` by
/// damped Gauss-Newton, starting from the log-log solution.
pub fn fit_nonlinear(curve: &PercentileCurve, range: FitRange) -> Result<PowerLawFit> {
    let points = in_range(curve, &range);
    if points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: points.len(),
        });
    }
    let (mut a, mut alpha) = match fit_loglog(curve, range) {
        Ok(f) => (f.coefficient, f.exponent),
        Err(_) => {
            let max = points.iter().map(|p| p.1).fold(0.0, f64::max);
            (if max > 0.0 { max } else { 1.0 }, 1.0)
        }
    };

    let sse = |a: f64, alpha: f64| -> f64 {
        points
            .iter()
            .map(|&(x, y)| (y - a * x.powf(alpha)).powi(2))
            .sum()
    };

    let mut current = sse(a, alpha);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < NONLINEAR_MAX_ITERATIONS {
        iterations += 1;
        // normal equations of the linearized problem
        let (mut j11, mut j12, mut j22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &points {
            let xa = x.powf(alpha);
            let da = xa;
            let dalpha = a * xa * x.ln();
            let r = y - a * xa;
            j11 += da * da;
            j12 += da * dalpha;
            j22 += dalpha * dalpha;
            g1 += da * r;
            g2 += dalpha * r;
        }
        let det = j11 * j22 - j12 * j12;
        if !(det.abs() > 0.0) || !det.is_finite() {
            converged = current == 0.0;
            break;
        }
        let step_a = (j22 * g1 - j12 * g2) / det;
        let step_alpha = (j11 * g2 - j12 * g1) / det;

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let na = a + scale * step_a;
            let nalpha = alpha + scale * step_alpha;
            if na > 0.0 {
                let s = sse(na, nalpha);
                if s <= current {
                    accepted = Some((na, nalpha, s));
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some((na, nalpha, s)) = accepted else {
            // no descent along the Gauss-Newton direction: at the optimum
            // to working precision
            converged = true;
            break;
        };
        let change = ((na - a) / a)
            .abs()
            .max((nalpha - alpha).abs() / alpha.abs().max(1.0));
        a = na;
        alpha = nalpha;
        current = s;
        if change < NONLINEAR_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            coefficient: a,
            exponent: alpha,
        });
    }
    let mut fit = PowerLawFit {
        method: FitMethod::NonlinearLeastSquares,
        range: Some(range),
        coefficient: a,
        exponent: alpha,
        r2_log: None,
        r2_linear: None,
        n_points: points.len(),
        excluded_zero_count: points.iter().filter(|p| p.1 <= 0.0).count(),
        iterations: Some(iterations),
    };
    attach_diagnostics(&mut fit, &points);
    Ok(fit)
}

pub fn fit_curve(
    curve: &PercentileCurve,
    range: FitRange,
    method: FitMethod,
) -> Result<PowerLawFit> {
    match method {
        FitMethod::LogLogLeastSquares => fit_loglog(curve, range),
        FitMethod::NonlinearLeastSquares => fit_nonlinear(curve, range),
        FitMethod::ClosedForm | FitMethod::Supplied => Err(Error::UnsupportedCombination(
            "curves are fitted by log-log or nonlinear least squares",
        )),
    }
}
