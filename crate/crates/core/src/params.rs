use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Metric used between observers and incoming points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Distance {
    /// Distance between two equally sized vectors.
    #[inline]
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Distance::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Distance::Manhattan => diffs.sum(),
            Distance::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distance::Euclidean => "euclidean",
            Distance::Manhattan => "manhattan",
            Distance::Chebyshev => "chebyshev",
        })
    }
}

impl FromStr for Distance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Distance::Euclidean),
            "manhattan" => Ok(Distance::Manhattan),
            "chebyshev" => Ok(Distance::Chebyshev),
            other => Err(format!("unknown distance `{other}`")),
        }
    }
}

/// Algorithm parameters of the observer model.
///
/// Times (`t_ewma`, `t_period`) are in the same unit as stream timestamps,
/// canonically seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of observers kept in the model.
    pub k: usize,
    /// Number of nearest observers consulted per point.
    pub x: usize,
    /// Time constant of the exponential window.
    pub t_ewma: f64,
    /// Base period of the Fourier basis; bin `n` captures period `t_period / n`.
    pub t_period: f64,
    /// Number of frequency bins.
    pub n_bins: usize,
    /// Fraction of observers allowed to be idle.
    pub q_id: f64,
    pub seed: u64,
    #[serde(default)]
    pub distance: Distance,
}

/// Non-fatal parameter combinations that usually indicate a misconfiguration.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamWarning {
    /// The base period is not smaller than the EWMA time constant, so the
    /// coefficients will not approximate Fourier coefficients.
    PeriodNotBelowWindow { t_period: f64, t_ewma: f64 },
    /// More nearest observers requested than the model can hold.
    XExceedsK { x: usize, k: usize },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamWarning::PeriodNotBelowWindow { t_period, t_ewma } => write!(
                f,
                "base period {t_period} should be well below the EWMA time constant {t_ewma}"
            ),
            ParamWarning::XExceedsK { x, k } => {
                write!(f, "x = {x} exceeds the number of observers k = {k}")
            }
        }
    }
}

impl ModelParams {
    pub fn new(k: usize, x: usize, t_ewma: f64, t_period: f64, n_bins: usize, q_id: f64) -> Self {
        ModelParams {
            k,
            x,
            t_ewma,
            t_period,
            n_bins,
            q_id,
            seed: 0,
            distance: Distance::Euclidean,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_distance(mut self, distance: Distance) -> Self {
        self.distance = distance;
        self
    }

    /// Checks hard constraints, returning the first violated one.
    pub fn validate(&self) -> Result<(), ModelError> {
        fn bad(name: &'static str, reason: impl Into<String>) -> Result<(), ModelError> {
            Err(ModelError::InvalidParameter {
                name,
                reason: reason.into(),
            })
        }
        if self.k < 1 {
            return bad("k", "must be at least 1");
        }
        if self.x < 1 {
            return bad("x", "must be at least 1");
        }
        if self.n_bins < 1 {
            return bad("n_bins", "must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.q_id) {
            return bad("q_id", format!("must lie in [0, 1], got {}", self.q_id));
        }
        if !(self.t_ewma.is_finite() && self.t_ewma > 0.0) {
            return bad("T", format!("must be positive and finite, got {}", self.t_ewma));
        }
        if !(self.t_period.is_finite() && self.t_period > 0.0) {
            return bad("T0", format!("must be positive and finite, got {}", self.t_period));
        }
        Ok(())
    }

    /// Soft recommendations; callers decide whether to surface them.
    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        if self.t_period >= self.t_ewma {
            out.push(ParamWarning::PeriodNotBelowWindow {
                t_period: self.t_period,
                t_ewma: self.t_ewma,
            });
        }
        if self.x > self.k {
            out.push(ParamWarning::XExceedsK { x: self.x, k: self.k });
        }
        out
    }
}
