//! Deterministic synthetic streams: clusters that switch on and off
//! periodically, plus uniformly scattered spatial outliers and contextual
//! outliers placed on a cluster while that cluster is switched off.
//!
//! Each source (every cluster, the spatial background and the contextual
//! injector) is an independent Poisson process with its own random
//! sub-stream, so changing one rate leaves the other sources' points intact.
//! Cluster points follow an isotropic Gaussian with `sigma = radius / 3`,
//! truncated at `radius`.

use std::f64::consts::PI;

use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::gamma;

use crate::error::GenError;
use crate::rng::StreamRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Label {
    Normal = 0,
    SpatialOutlier = 1,
    ContextualOutlier = 2,
}

impl Label {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Label> {
        match code {
            0 => Some(Label::Normal),
            1 => Some(Label::SpatialOutlier),
            2 => Some(Label::ContextualOutlier),
            _ => None,
        }
    }

    pub fn is_outlier(self) -> bool {
        self != Label::Normal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub t: f64,
    pub v: Vec<f64>,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub center: Vec<f64>,
    /// Truncation radius; every point of the cluster lies within it.
    pub radius: f64,
    /// Arrival rate while switched on, points per second.
    pub base_rate: f64,
    /// Fraction of the period at which the cluster switches on.
    pub on_start: f64,
    /// Fraction of the period at which the cluster switches off.
    pub on_end: f64,
    pub period: f64,
}

impl ClusterSpec {
    pub fn phase(&self, t: f64) -> f64 {
        (t / self.period).rem_euclid(1.0)
    }

    pub fn is_on(&self, t: f64) -> bool {
        let p = self.phase(t);
        self.on_start <= p && p < self.on_end
    }

    /// Total switched-on time within `[0, duration)`.
    pub fn on_duration(&self, duration: f64) -> f64 {
        let full = (duration / self.period).floor();
        let rest = duration - full * self.period;
        let partial = (rest - self.on_start * self.period)
            .clamp(0.0, (self.on_end - self.on_start) * self.period);
        full * (self.on_end - self.on_start) * self.period + partial
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        dist(&self.center, v) <= self.radius
    }

    /// Density of the truncated Gaussian shape at `v` (integrates to 1).
    pub fn density(&self, v: &[f64]) -> f64 {
        let r = dist(&self.center, v);
        if r > self.radius {
            return 0.0;
        }
        let d = self.center.len() as f64;
        let sigma = self.radius / 3.0;
        let mass = ChiSquared::new(d).expect("positive dof").cdf(9.0);
        let norm = (2.0 * PI * sigma * sigma).powf(d / 2.0);
        (-0.5 * (r / sigma).powi(2)).exp() / norm / mass
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        let sigma = self.radius / 3.0;
        loop {
            let v: Vec<f64> = self
                .center
                .iter()
                .map(|c| {
                    let z: f64 = StandardNormal.sample(rng);
                    c + sigma * z
                })
                .collect();
            if self.contains(&v) {
                return v;
            }
        }
    }
}

/// Axis-aligned box holding the spatial outliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bounds {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        v.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub clusters: Vec<ClusterSpec>,
    /// Points per second, uniform over the bounds outside every cluster's
    /// doubled radius.
    pub spatial_outlier_rate: f64,
    /// Points per second before the off-phase filter: each arrival picks a
    /// cluster uniformly and is kept only if that cluster is switched off.
    pub contextual_outlier_rate: f64,
    pub duration: f64,
    pub dims: usize,
    pub seed: u64,
    /// Defaults to the cluster extents padded by four radii.
    #[serde(default)]
    pub bounds: Option<Bounds>,
}

impl StreamSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InvalidSpec(m));
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        if self.dims == 0 {
            return bad("dims must be at least 1".into());
        }
        if self.clusters.is_empty() {
            return bad("at least one cluster is required".into());
        }
        for (name, r) in [
            ("spatial_outlier_rate", self.spatial_outlier_rate),
            ("contextual_outlier_rate", self.contextual_outlier_rate),
        ] {
            if !(r.is_finite() && r >= 0.0) {
                return bad(format!("{name} must be non-negative, got {r}"));
            }
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.center.len() != self.dims {
                return bad(format!("cluster {i} center has {} dims", c.center.len()));
            }
            if !(c.radius > 0.0 && c.radius.is_finite()) {
                return bad(format!("cluster {i} radius must be positive"));
            }
            if !(c.base_rate > 0.0 && c.base_rate.is_finite()) {
                return bad(format!("cluster {i} base_rate must be positive"));
            }
            if !(c.period > 0.0 && c.period.is_finite()) {
                return bad(format!("cluster {i} period must be positive"));
            }
            if !(0.0 <= c.on_start && c.on_start < c.on_end && c.on_end <= 1.0) {
                return bad(format!(
                    "cluster {i} duty window [{}, {}) must satisfy 0 <= start < end <= 1",
                    c.on_start, c.on_end
                ));
            }
        }
        if let Some(b) = &self.bounds {
            if b.lo.len() != self.dims || b.hi.len() != self.dims {
                return bad("bounds dimension mismatch".into());
            }
            if b.lo.iter().zip(&b.hi).any(|(l, h)| !(l < h)) {
                return bad("bounds must satisfy lo < hi on every axis".into());
            }
        }
        if self.spatial_outlier_rate > 0.0 && self.free_volume() <= 0.0 {
            return bad("no room for spatial outliers outside the clusters".into());
        }
        Ok(())
    }

    pub fn bounds(&self) -> Bounds {
        if let Some(b) = &self.bounds {
            return b.clone();
        }
        let mut lo = vec![f64::INFINITY; self.dims];
        let mut hi = vec![f64::NEG_INFINITY; self.dims];
        for c in &self.clusters {
            for (d, x) in c.center.iter().enumerate() {
                lo[d] = lo[d].min(x - 4.0 * c.radius);
                hi[d] = hi[d].max(x + 4.0 * c.radius);
            }
        }
        Bounds { lo, hi }
    }

    /// Box volume minus the clusters' doubled-radius balls (overlaps and
    /// clipping at the box boundary are ignored).
    pub fn free_volume(&self) -> f64 {
        let d = self.dims as f64;
        let unit_ball = PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0);
        let excluded: f64 = self
            .clusters
            .iter()
            .map(|c| unit_ball * (2.0 * c.radius).powf(d))
            .sum();
        self.bounds().volume() - excluded
    }

    /// Ground-truth arrival rate density at `(v, t)`.
    pub fn rate_at(&self, v: &[f64], t: f64) -> f64 {
        let m = self.clusters.len() as f64;
        let mut rate = 0.0;
        for c in &self.clusters {
            let dens = c.density(v);
            if dens == 0.0 {
                continue;
            }
            if c.is_on(t) {
                rate += c.base_rate * dens;
            } else {
                rate += self.contextual_outlier_rate / m * dens;
            }
        }
        if self.spatial_outlier_rate > 0.0 && self.in_background(v) {
            rate += self.spatial_outlier_rate / self.free_volume();
        }
        rate
    }

    /// Expected `(normal, spatial, contextual)` point counts.
    pub fn expected_counts(&self) -> (f64, f64, f64) {
        let normal = self
            .clusters
            .iter()
            .map(|c| c.base_rate * c.on_duration(self.duration))
            .sum();
        let spatial = self.spatial_outlier_rate * self.duration;
        let m = self.clusters.len() as f64;
        let off: f64 = self
            .clusters
            .iter()
            .map(|c| self.duration - c.on_duration(self.duration))
            .sum();
        (normal, spatial, self.contextual_outlier_rate * off / m)
    }

    fn in_background(&self, v: &[f64]) -> bool {
        self.bounds().contains(v)
            && self
                .clusters
                .iter()
                .all(|c| dist(&c.center, v) > 2.0 * c.radius)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy)]
enum SourceKind {
    Cluster(usize),
    Spatial,
    Contextual,
}

#[derive(Debug, Clone)]
struct Source {
    kind: SourceKind,
    rng: StreamRng,
    clock: f64,
    gap: Option<Exp<f64>>,
    pending: Option<LabeledPoint>,
}

/// Streaming merge of all sources in timestamp order.
#[derive(Debug, Clone)]
pub struct StreamGenerator {
    spec: StreamSpec,
    bounds: Bounds,
    sources: Vec<Source>,
    last_t: f64,
}

impl StreamGenerator {
    pub fn new(spec: StreamSpec) -> Result<Self, GenError> {
        spec.validate()?;
        let kinds = (0..spec.clusters.len())
            .map(|i| (SourceKind::Cluster(i), spec.clusters[i].base_rate))
            .chain([
                (SourceKind::Spatial, spec.spatial_outlier_rate),
                (SourceKind::Contextual, spec.contextual_outlier_rate),
            ]);
        let sources = kinds
            .enumerate()
            .map(|(i, (kind, rate))| Source {
                kind,
                rng: StreamRng::from_seed_stream(spec.seed, i as u64),
                clock: 0.0,
                gap: (rate > 0.0).then(|| Exp::new(rate).expect("positive rate")),
                pending: None,
            })
            .collect();
        let mut g = StreamGenerator {
            bounds: spec.bounds(),
            spec,
            sources,
            last_t: f64::NEG_INFINITY,
        };
        for i in 0..g.sources.len() {
            g.advance(i);
        }
        Ok(g)
    }

    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    fn advance(&mut self, i: usize) {
        let spec = &self.spec;
        let bounds = &self.bounds;
        let src = &mut self.sources[i];
        src.pending = None;
        let Some(gap) = src.gap else { return };
        loop {
            src.clock += gap.sample(&mut src.rng);
            let t = src.clock;
            if t >= spec.duration {
                return;
            }
            let point = match src.kind {
                SourceKind::Cluster(c) => {
                    let cl = &spec.clusters[c];
                    cl.is_on(t).then(|| (cl.sample(&mut src.rng), Label::Normal))
                }
                SourceKind::Spatial => Some((
                    sample_background(spec, bounds, &mut src.rng),
                    Label::SpatialOutlier,
                )),
                SourceKind::Contextual => {
                    let m = spec.clusters.len();
                    let c = ((src.rng.uniform() * m as f64) as usize).min(m - 1);
                    let cl = &spec.clusters[c];
                    (!cl.is_on(t)).then(|| (cl.sample(&mut src.rng), Label::ContextualOutlier))
                }
            };
            if let Some((v, label)) = point {
                src.pending = Some(LabeledPoint { t, v, label });
                return;
            }
        }
    }
}

fn sample_background(spec: &StreamSpec, bounds: &Bounds, rng: &mut StreamRng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = bounds
            .lo
            .iter()
            .zip(&bounds.hi)
            .map(|(l, h)| l + (h - l) * rng.uniform())
            .collect();
        if spec.clusters.iter().all(|c| dist(&c.center, &v) > 2.0 * c.radius) {
            return v;
        }
    }
}

impl Iterator for StreamGenerator {
    type Item = LabeledPoint;

    fn next(&mut self) -> Option<LabeledPoint> {
        loop {
            let next = self
                .sources
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.pending.as_ref().map(|p| (i, p.t)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))?;
            let point = self.sources[next.0].pending.take().expect("pending point");
            self.advance(next.0);
            // Keep timestamps strictly increasing.
            if point.t > self.last_t {
                self.last_t = point.t;
                return Some(point);
            }
        }
    }
}

/// Collects the whole stream.
pub fn generate(spec: &StreamSpec) -> Result<Vec<LabeledPoint>, GenError> {
    Ok(StreamGenerator::new(spec.clone())?.collect())
}

/// The five-cluster on/off stream used for the contextual-outlier experiments.
///
/// Periods are `{T0, T0, T0/2, T0/2, T0/4}` with staggered half-period duty
/// windows, so at any instant some clusters are switched off.
#[derive(Debug, Clone, PartialEq)]
pub struct PocPreset {
    /// Base period in seconds.
    pub t_period: f64,
    /// Stream length in base periods.
    pub periods: f64,
    /// Arrival rate of a switched-on cluster, points per second.
    pub cluster_rate: f64,
    /// Spatial outliers as a fraction of the expected normal points.
    pub spatial_fraction: f64,
    /// Contextual outliers as a fraction of the expected normal points.
    pub contextual_fraction: f64,
    pub seed: u64,
}

impl Default for PocPreset {
    fn default() -> Self {
        PocPreset {
            t_period: 600.0,
            periods: 30.0,
            cluster_rate: 2.0,
            spatial_fraction: 0.005,
            contextual_fraction: 0.005,
            seed: 1,
        }
    }
}

impl PocPreset {
    pub fn spec(&self) -> StreamSpec {
        let t0 = self.t_period;
        let layout: [([f64; 2], f64, (f64, f64)); 5] = [
            ([2.0, 2.0], t0, (0.0, 0.5)),
            ([8.0, 2.0], t0, (0.5, 1.0)),
            ([5.0, 5.0], t0 / 2.0, (0.0, 0.5)),
            ([2.0, 8.0], t0 / 2.0, (0.5, 1.0)),
            ([8.0, 8.0], t0 / 4.0, (0.25, 0.75)),
        ];
        let clusters = layout
            .iter()
            .map(|&(center, period, (on_start, on_end))| ClusterSpec {
                center: center.to_vec(),
                radius: 0.8,
                base_rate: self.cluster_rate,
                on_start,
                on_end,
                period,
            })
            .collect();
        let mut spec = StreamSpec {
            clusters,
            spatial_outlier_rate: 0.0,
            contextual_outlier_rate: 0.0,
            duration: self.periods * t0,
            dims: 2,
            seed: self.seed,
            bounds: Some(Bounds {
                lo: vec![0.0, 0.0],
                hi: vec![10.0, 10.0],
            }),
        };
        let (normal, _, _) = spec.expected_counts();
        let m = spec.clusters.len() as f64;
        let off: f64 = spec
            .clusters
            .iter()
            .map(|c| spec.duration - c.on_duration(spec.duration))
            .sum();
        spec.spatial_outlier_rate = self.spatial_fraction * normal / spec.duration;
        spec.contextual_outlier_rate = self.contextual_fraction * normal * m / off;
        spec
    }
}
