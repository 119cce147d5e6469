use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Snapshot time used for `moving_gauss` unless overridden.
pub const DEFAULT_MOVING_GAUSS_TIME: f64 = 0.125;

const DOMAIN_TOLERANCE: f64 = 1e-12;

/// Analytic reference fields used as transfer benchmarks.
///
/// 2D fields live on `[-1, 1]²`, 1D fields on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BenchmarkField {
    /// `sin(5πx)·sin(5πy)`
    Osc2d,
    /// Gaussian bump of width `1/√50` circling the origin at radius 0.5.
    MovingGauss { t: f64 },
    /// `sin(πx)`
    Sine1d,
    /// `exp(−400(x−0.35)²) − exp(−200(x−0.75)²)/2`
    TwoPeak1d,
    /// `−x² − y²`
    Paraboloid2d,
    /// Multi-frequency profile damped by `sin(πx)·sin(πy)`, zero on the boundary.
    MultiPeak2d,
}

impl BenchmarkField {
    pub const NAMES: [&'static str; 6] = [
        "osc2d",
        "moving_gauss",
        "sine1d",
        "twopeak1d",
        "paraboloid2d",
        "multipeak2d",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkField::Osc2d => "osc2d",
            BenchmarkField::MovingGauss { .. } => "moving_gauss",
            BenchmarkField::Sine1d => "sine1d",
            BenchmarkField::TwoPeak1d => "twopeak1d",
            BenchmarkField::Paraboloid2d => "paraboloid2d",
            BenchmarkField::MultiPeak2d => "multipeak2d",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BenchmarkField::Sine1d | BenchmarkField::TwoPeak1d => 1,
            _ => 2,
        }
    }

    /// Whether `p` lies in the field's domain (with a 1e-12 margin).
    pub fn contains(&self, p: &Point) -> bool {
        let (lo, hi) = if self.dim() == 1 { (0.0, 1.0) } else { (-1.0, 1.0) };
        p.dim() == self.dim()
            && p
                .coords()
                .iter()
                .all(|&c| c >= lo - DOMAIN_TOLERANCE && c <= hi + DOMAIN_TOLERANCE)
    }

    /// Exact value at `p`. Points outside the domain are rejected.
    pub fn eval(&self, p: &Point) -> Result<f64> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        if !self.contains(p) {
            return Err(Error::invalid(format!(
                "{p:?} is outside the domain of {}",
                self.name()
            )));
        }
        Ok(self.value(p.x(), p.y()))
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        match *self {
            BenchmarkField::Osc2d => (5.0 * PI * x).sin() * (5.0 * PI * y).sin(),
            BenchmarkField::MovingGauss { t } => {
                let cx = 0.5 * (2.0 * PI * t).cos();
                let cy = 0.5 * (2.0 * PI * t).sin();
                (-50.0 * ((x - cx).powi(2) + (y - cy).powi(2))).exp()
            }
            BenchmarkField::Sine1d => (PI * x).sin(),
            BenchmarkField::TwoPeak1d => {
                (-400.0 * (x - 0.35).powi(2)).exp() - (-200.0 * (x - 0.75).powi(2)).exp() / 2.0
            }
            BenchmarkField::Paraboloid2d => -x * x - y * y,
            BenchmarkField::MultiPeak2d => {
                let envelope = (PI * x).sin() * (PI * y).sin();
                let inner = (6.0 * PI * x).sin() * (4.0 * PI * y).cos()
                    + 0.6 * (8.0 * PI * (x - 0.3)).sin() * (6.0 * PI * (y + 0.2)).cos()
                    - 0.4 * (10.0 * PI * x).cos() * (8.0 * PI * y).sin();
                envelope * inner
            }
        }
    }
}

impl fmt::Display for BenchmarkField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchmarkField::MovingGauss { t } if *t != DEFAULT_MOVING_GAUSS_TIME => {
                write!(f, "moving_gauss@{t}")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for BenchmarkField {
    type Err = Error;

    /// Accepts the identifiers in [`BenchmarkField::NAMES`]; `moving_gauss@<t>`
    /// selects a snapshot time.
    fn from_str(s: &str) -> Result<Self> {
        let (name, time) = match s.split_once('@') {
            Some((n, t)) => (n, Some(t)),
            None => (s, None),
        };
        let field = match name {
            "osc2d" => BenchmarkField::Osc2d,
            "moving_gauss" => {
                let t = match time {
                    Some(t) => t
                        .parse::<f64>()
                        .ok()
                        .filter(|t| t.is_finite())
                        .ok_or_else(|| Error::invalid(format!("bad snapshot time `{t}`")))?,
                    None => DEFAULT_MOVING_GAUSS_TIME,
                };
                return Ok(BenchmarkField::MovingGauss { t });
            }
            "sine1d" => BenchmarkField::Sine1d,
            "twopeak1d" => BenchmarkField::TwoPeak1d,
            "paraboloid2d" => BenchmarkField::Paraboloid2d,
            "multipeak2d" => BenchmarkField::MultiPeak2d,
            _ => {
                return Err(Error::invalid(format!(
                    "unknown field `{s}` (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        if time.is_some() {
            return Err(Error::invalid(format!("field `{name}` takes no time parameter")));
        }
        Ok(field)
    }
}
