//! Sliding-window k-nearest-neighbor baseline.
//!
//! The window is time based: a point stored at `t_p` contributes to the score
//! of a point at `t` while `t_p > t - window`. The score is the distance to
//! the `k_nn`-th nearest stored neighbor, or to the farthest one when fewer
//! are stored. Linear scan, no index.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::Distance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwKnnParams {
    pub window: f64,
    pub k_nn: usize,
    #[serde(default)]
    pub distance: Distance,
}

impl SwKnnParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.window.is_finite() && self.window > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "window",
                reason: format!("must be positive, got {}", self.window),
            });
        }
        if self.k_nn < 1 {
            return Err(ModelError::InvalidParameter {
                name: "k_nn",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Score of one point; `warmup` is set when the window was empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwKnnScore {
    pub score: f64,
    pub warmup: bool,
}

#[derive(Debug, Clone)]
pub struct SwKnn {
    params: SwKnnParams,
    window: VecDeque<(f64, Vec<f64>)>,
    dists: Vec<f64>,
    dim: Option<usize>,
    t_last: Option<f64>,
}

impl SwKnn {
    pub fn new(params: SwKnnParams) -> Result<Self, ModelError> {
        params.validate()?;
        Ok(SwKnn {
            params,
            window: VecDeque::new(),
            dists: Vec::new(),
            dim: None,
            t_last: None,
        })
    }

    pub fn params(&self) -> &SwKnnParams {
        &self.params
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Evicts expired points, scores `v` against the rest, then stores it.
    pub fn process(&mut self, v: &[f64], t: f64) -> Result<SwKnnScore, ModelError> {
        if !t.is_finite() {
            return Err(ModelError::NonFinite("timestamp"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite("feature vector"));
        }
        if let Some(prev) = self.t_last {
            if t < prev {
                return Err(ModelError::OutOfOrder { t, previous: prev });
            }
        }
        if let Some(d) = self.dim {
            if d != v.len() {
                return Err(ModelError::DimensionMismatch { expected: d, got: v.len() });
            }
        }
        self.dim = Some(v.len());
        self.t_last = Some(t);

        let horizon = t - self.params.window;
        while self.window.front().is_some_and(|(tp, _)| *tp <= horizon) {
            self.window.pop_front();
        }

        let out = if self.window.is_empty() {
            SwKnnScore { score: 0.0, warmup: true }
        } else {
            self.dists.clear();
            let metric = self.params.distance;
            self.dists
                .extend(self.window.iter().map(|(_, p)| metric.eval(p, v)));
            let kth = self.params.k_nn.min(self.dists.len()) - 1;
            let (_, d, _) = self.dists.select_nth_unstable_by(kth, f64::total_cmp);
            SwKnnScore { score: *d, warmup: false }
        };
        self.window.push_back((t, v.to_vec()));
        Ok(out)
    }
}
