//! Shared fixtures for the throughput benchmarks.

use sdooop::{generate, LabeledPoint, PocPreset};

/// A deterministic slice of the five-cluster stream.
pub fn poc_points(n: usize) -> Vec<LabeledPoint> {
    let spec = PocPreset::default().spec();
    let mut pts = generate(&spec).expect("preset is valid");
    pts.truncate(n);
    pts
}
