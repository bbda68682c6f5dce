//! Versioned JSON persistence of a complete model state.
//!
//! ```json
//! {
//!   "format": "sdooop-model",
//!   "version": 1,
//!   "params": { "k": 5, "x": 3, "t_ewma": 100.0, "t_period": 10.0, "n_bins": 4,
//!               "q_id": 0.2, "seed": 7, "distance": "euclidean" },
//!   "dim": 2,
//!   "observers": [
//!     { "position": [0.5, 1.0], "coeffs": [[1.0, 0.0], [0.8, -0.1]], "h": 1.4, "inserted_at": 3.0 }
//!   ],
//!   "i_lao": 0, "t_lao": 3.0, "points_seen": 12, "t_last": 9.5,
//!   "rng": "<112 hex digits>"
//! }
//! ```
//!
//! Floats are written in shortest round-trip form and parsed exactly, so a
//! restored model continues a stream bit-identically.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SnapshotError;
use crate::model::Model;
use crate::observer::Observer;
use crate::params::ModelParams;
use crate::rng::StreamRng;

pub const SNAPSHOT_FORMAT: &str = "sdooop-model";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObserverRecord {
    pub position: Vec<f64>,
    /// `[re, im]` per frequency bin.
    pub coeffs: Vec<[f64; 2]>,
    pub h: f64,
    pub inserted_at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSnapshot {
    pub format: String,
    pub version: u32,
    pub params: ModelParams,
    pub dim: Option<usize>,
    pub observers: Vec<ObserverRecord>,
    pub i_lao: u64,
    pub t_lao: f64,
    pub points_seen: u64,
    pub t_last: Option<f64>,
    pub rng: String,
}

impl From<&Observer> for ObserverRecord {
    fn from(o: &Observer) -> Self {
        ObserverRecord {
            position: o.position.clone(),
            coeffs: o.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            h: o.h,
            inserted_at: o.inserted_at,
        }
    }
}

impl Model {
    pub fn snapshot(&self) -> ModelSnapshot {
        ModelSnapshot {
            format: SNAPSHOT_FORMAT.to_string(),
            version: SNAPSHOT_VERSION,
            params: self.params.clone(),
            dim: self.dim,
            observers: self.observers.iter().map(ObserverRecord::from).collect(),
            i_lao: self.i_lao,
            t_lao: self.t_lao,
            points_seen: self.points_seen,
            t_last: self.t_last,
            rng: self.rng.state_hex(),
        }
    }

    pub fn restore(snapshot: &ModelSnapshot) -> Result<Model, SnapshotError> {
        snapshot.validate()?;
        let observers = snapshot
            .observers
            .iter()
            .map(|r| Observer {
                position: r.position.clone(),
                coeffs: r.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                h: r.h,
                inserted_at: r.inserted_at,
            })
            .collect();
        let dim = snapshot
            .dim
            .or_else(|| snapshot.observers.first().map(|o| o.position.len()));
        Ok(Model::from_parts(
            snapshot.params.clone(),
            observers,
            dim,
            snapshot.i_lao,
            snapshot.t_lao,
            snapshot.points_seen,
            snapshot.t_last,
            StreamRng::from_state_hex(&snapshot.rng)?,
        ))
    }
}

impl ModelSnapshot {
    pub fn validate(&self) -> Result<(), SnapshotError> {
        if self.format != SNAPSHOT_FORMAT || self.version != SNAPSHOT_VERSION {
            return Err(SnapshotError::Version {
                format: self.format.clone(),
                version: self.version,
            });
        }
        let bad = |msg: String| Err(SnapshotError::Malformed(msg));
        self.params
            .validate()
            .map_err(|e| SnapshotError::Malformed(e.to_string()))?;
        if self.observers.len() > self.params.k {
            return bad(format!(
                "{} observers exceed k = {}",
                self.observers.len(),
                self.params.k
            ));
        }
        if !self.observers.is_empty() && self.t_last.is_none() {
            return bad("observers present but no last timestamp".into());
        }
        let dim = self.dim.or_else(|| self.observers.first().map(|o| o.position.len()));
        for (i, o) in self.observers.iter().enumerate() {
            if o.coeffs.len() != self.params.n_bins {
                return bad(format!(
                    "observer {i} has {} coefficients, n_bins is {}",
                    o.coeffs.len(),
                    self.params.n_bins
                ));
            }
            if Some(o.position.len()) != dim {
                return bad(format!("observer {i} has dimension {}", o.position.len()));
            }
            if o.coeffs[0][1] != 0.0 {
                return bad(format!("observer {i} has a complex bin-0 coefficient"));
            }
            let finite = o.position.iter().all(|x| x.is_finite())
                && o.coeffs.iter().flatten().all(|x| x.is_finite())
                && o.h.is_finite()
                && o.inserted_at.is_finite();
            if !finite {
                return bad(format!("observer {i} holds non-finite values"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, SnapshotError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, SnapshotError> {
        let snap: ModelSnapshot = serde_json::from_str(s)?;
        snap.validate()?;
        Ok(snap)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), SnapshotError> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")
            .map_err(|e| SnapshotError::Malformed(format!("write failed: {e}")))?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self, SnapshotError> {
        let snap: ModelSnapshot = serde_json::from_reader(r)?;
        snap.validate()?;
        Ok(snap)
    }
}
