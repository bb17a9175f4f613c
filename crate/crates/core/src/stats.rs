//! Small statistics helpers: least-squares fits, summaries and log-scaled values.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData(format!("{} abscissae but {} ordinates", x.len(), y.len())));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("{n} points, need at least 2")));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("abscissae have no spread".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(LinearFit { slope, intercept, r_squared })
}

/// Fit of `ln y` against `ln x`; all inputs must be positive.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if let Some(v) = x.iter().chain(y).find(|v| !(**v > 0.0)) {
        return Err(Error::NonPositiveInput { name: "log-log sample", value: *v });
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    Ok(Summary { count: n, min: v[0], max: v[n - 1], mean: v.iter().sum::<f64>() / n as f64, median })
}

/// `mantissa · e^{log_scale}`, for quantities carrying factors like `e^{2sσ}`
/// that overflow `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue { mantissa: 0.0, log_scale: 0.0 };

    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        Self { mantissa, log_scale }
    }

    /// The plain value; may overflow to infinity.
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    /// `ln |value|`.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }

    pub fn plus(self, other: ScaledValue) -> ScaledValue {
        if self.mantissa == 0.0 {
            return other;
        }
        if other.mantissa == 0.0 {
            return self;
        }
        let s = self.log_scale.max(other.log_scale);
        ScaledValue::new(self.mantissa * (self.log_scale - s).exp() + other.mantissa * (other.log_scale - s).exp(), s)
    }

    pub fn scale(self, c: f64) -> ScaledValue {
        ScaledValue::new(self.mantissa * c, self.log_scale)
    }

    /// `self / other` as a plain number.
    pub fn ratio(self, other: ScaledValue) -> f64 {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }
}
