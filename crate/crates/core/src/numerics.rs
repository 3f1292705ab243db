//! Error function, its complement and inverse.
//!
//! `erf` uses the positive-term series `erf(x) = 2/sqrt(pi) e^{-x^2} sum (2x^2)^n x / (2n+1)!!`
//! below |x| = 2 and a Lentz continued fraction for `erfc` above it. The
//! inverse starts from a single-precision polynomial guess and is polished
//! with Halley steps against `erf`/`erfc`.

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_LIMIT: f64 = 2.0;
/// erfc(6) is about 2e-17, below half an ulp of 1.
const SATURATION: f64 = 6.0;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                what: "probability",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Maps `p` to `2p - 1`; fails at the endpoints where the inverse error
    /// function is singular.
    pub fn to_signed_unit(self) -> Result<SignedUnit> {
        SignedUnit::new(2.0 * self.0 - 1.0)
    }
}

/// A value in the open interval `(-1, 1)`, the domain of [`erf_inv`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SignedUnit(f64);

impl SignedUnit {
    pub fn new(value: f64) -> Result<Self> {
        if value > -1.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                what: "erf_inv argument",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn erf_inv(self) -> f64 {
        erf_inv_unchecked(self.0)
    }
}

/// Gauss error function. Odd and exact under sign flip; saturates to ±1
/// for |t| >= 6. NaN propagates.
pub fn erf(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    let x = t.abs();
    let v = if x < SERIES_LIMIT {
        erf_series(x)
    } else if x < SATURATION {
        1.0 - erfc_continued_fraction(x)
    } else {
        1.0
    };
    if t.is_sign_negative() {
        -v
    } else {
        v
    }
}

/// Complementary error function `1 - erf(t)`, evaluated without
/// cancellation for large positive `t`.
pub fn erfc(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t < 0.0 {
        return 2.0 - erfc(-t);
    }
    if t < SERIES_LIMIT {
        1.0 - erf_series(t)
    } else if t < 27.0 {
        erfc_continued_fraction(t)
    } else {
        0.0
    }
}

fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= two_x2 / f64::from(2 * n + 1);
        sum += term;
        if term <= sum * 1e-17 || n > 200 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = f64::from(n) * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}

/// Inverse error function on `(-1, 1)`.
pub fn erf_inv(p: f64) -> Result<f64> {
    SignedUnit::new(p).map(SignedUnit::erf_inv)
}

/// Inverse complementary error function on `(0, 2)`.
pub fn erfc_inv(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 2.0) {
        return Err(Error::Domain {
            what: "erfc_inv argument",
            value: q,
        });
    }
    if q <= 1.0 {
        Ok(erf_inv_from_tail(q))
    } else {
        Ok(-erf_inv_from_tail(2.0 - q))
    }
}

fn erf_inv_unchecked(p: f64) -> f64 {
    if p == 0.0 {
        return p;
    }
    let a = p.abs();
    let t = if a <= 0.5 {
        refine_central(a, initial_guess(a))
    } else {
        // 1 - a is exact here (Sterbenz)
        erf_inv_from_tail(1.0 - a)
    };
    t.copysign(p)
}

/// Solves `erfc(t) = q` for `q` in `(0, 1]`, returning `t >= 0`.
fn erf_inv_from_tail(q: f64) -> f64 {
    if q == 1.0 {
        return 0.0;
    }
    let guess = if q > 1e-30 {
        giles_guess(-(q * (2.0 - q)).ln(), 1.0 - q)
    } else {
        // Asymptotic start, erfc(t) ~ e^{-t^2} / (t sqrt(pi))
        let l = -(q * std::f64::consts::PI.sqrt()).ln();
        (l - 0.5 * l.ln()).sqrt()
    };
    let mut t = guess;
    for _ in 0..50 {
        let resid = erfc(t) - q;
        let deriv = -FRAC_2_SQRT_PI * (-t * t).exp();
        if deriv == 0.0 {
            break;
        }
        let step = halley_step(resid / deriv, t);
        t -= step;
        if step.abs() <= 1e-16 * t.abs().max(1e-300) {
            break;
        }
    }
    t
}

fn refine_central(a: f64, guess: f64) -> f64 {
    let mut t = guess;
    for _ in 0..50 {
        let resid = erf(t) - a;
        let deriv = FRAC_2_SQRT_PI * (-t * t).exp();
        let step = halley_step(resid / deriv, t);
        t -= step;
        if step.abs() <= 1e-16 * t.abs() {
            break;
        }
    }
    t
}

// For g = erf - p (or erfc - q) the second derivative is -2t g', so the
// Halley correction is newton / (1 + t * newton).
fn halley_step(newton: f64, t: f64) -> f64 {
    let denom = 1.0 + t * newton;
    if denom.abs() < 0.5 {
        newton
    } else {
        newton / denom
    }
}

/// Single-precision polynomial approximation (Giles 2010), accurate to
/// about 1e-7 on `[0, 1)`.
fn initial_guess(x: f64) -> f64 {
    giles_guess(-((1.0 - x) * (1.0 + x)).ln(), x)
}

// `w` is -ln(1 - x^2), passed separately so tail callers can form it from
// 1 - x without cancellation.
fn giles_guess(mut w: f64, x: f64) -> f64 {
    let p = if w < 5.0 {
        w -= 2.5;
        let mut p = 2.810_226_36e-08;
        p = 3.432_739_39e-07 + p * w;
        p = -3.523_387_7e-06 + p * w;
        p = -4.391_506_54e-06 + p * w;
        p = 0.000_218_580_87 + p * w;
        p = -0.001_253_725_03 + p * w;
        p = -0.004_177_681_64 + p * w;
        p = 0.246_640_727 + p * w;
        1.501_409_41 + p * w
    } else {
        w = w.sqrt() - 3.0;
        let mut p = -0.000_200_214_257;
        p = 0.000_100_950_558 + p * w;
        p = 0.001_349_343_22 + p * w;
        p = -0.003_673_428_44 + p * w;
        p = 0.005_739_507_73 + p * w;
        p = -0.007_622_461_3 + p * w;
        p = 0.009_438_870_47 + p * w;
        p = 1.001_674_06 + p * w;
        2.832_976_82 + p * w
    };
    p * x
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile, `sqrt(2) * erf_inv(2p - 1)`, computed through
/// `erfc_inv` so that both tails keep relative precision.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "normal quantile probability",
            value: p,
        });
    }
    Ok(-std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)?)
}
