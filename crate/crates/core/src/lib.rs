//! Streaming outlier detection with observers that carry Fourier
//! coefficients of their neighborhood's arrival rate.
//!
//! A [`Model`] keeps `k` sampled points ("observers"). Each observer holds
//! `n_bins` complex EWMA accumulators whose inverse transform estimates how
//! busy its neighborhood is at any phase of the base period. Points are
//! scored against the observers that are active *now*, so a point that lands
//! on a cluster outside that cluster's usual time slot is still flagged.
//!
//! ```
//! use sdooop::{Model, ModelParams};
//!
//! let params = ModelParams::new(20, 3, 1000.0, 100.0, 8, 0.2).with_seed(1);
//! let mut model = Model::new(params).unwrap();
//! for i in 0..500 {
//!     let t = i as f64;
//!     let record = model.process(&[(t * 0.1).sin(), 0.0], t).unwrap();
//!     assert!(record.score >= 0.0);
//! }
//! assert!(model.observers().len() <= 20);
//! ```

pub mod ensemble;
pub mod error;
pub mod gen;
pub mod metrics;
pub mod model;
pub mod observer;
pub mod params;
pub mod rng;
pub mod snapshot;
pub mod stats;
pub mod swknn;

pub use ensemble::Ensemble;
pub use error::{GenError, MetricError, ModelError, SnapshotError};
pub use gen::{generate, ClusterSpec, Label, LabeledPoint, PocPreset, StreamGenerator, StreamSpec};
pub use model::{Model, Pool, ScoreRecord};
pub use observer::Observer;
pub use params::{Distance, ModelParams, ParamWarning};
pub use snapshot::ModelSnapshot;
pub use swknn::{SwKnn, SwKnnParams, SwKnnScore};
