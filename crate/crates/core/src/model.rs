//! The observer model: a fixed-size set of sampled points whose complex
//! EWMA coefficients record when each neighborhood is populated.
//!
//! Every call to [`Model::process`] runs the same fixed sequence:
//!
//! 1. build the nearest set over all observers and over the active ones,
//! 2. score the point as the median distance to its nearest active observers,
//! 3. fade every coefficient by the elapsed time and bump `h`,
//! 4. add one observation to each nearest observer (the set from step 1),
//! 5. sample the point as a new observer with the rate-controlled
//!    probability, evicting the observer with the lowest age-normalized mass
//!    when the model is full.
//!
//! Per-point cost is `O(k * n_bins + k * D)` and no buffer grows with the
//! number of processed points.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::observer::Observer;
use crate::params::{Distance, ModelParams};
use crate::rng::StreamRng;
use crate::stats::median_sorted;

/// Per-point output of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub t: f64,
    /// Median distance to the nearest active observers.
    pub score: f64,
    /// Set when no observer existed at scoring time; `score` is then 0.
    pub warmup: bool,
    pub n_active: usize,
    /// Whether the point was inserted as an observer.
    pub sampled: bool,
}

/// Which observers a nearest-neighbor query draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pool {
    All,
    Active,
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    masses: Vec<f64>,
    active: Vec<bool>,
    ranked: Vec<(f64, usize)>,
    nearest: Vec<usize>,
    nearest_active_dist: Vec<f64>,
    factors: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub(crate) params: ModelParams,
    pub(crate) observers: Vec<Observer>,
    pub(crate) dim: Option<usize>,
    pub(crate) i_lao: u64,
    pub(crate) t_lao: f64,
    pub(crate) points_seen: u64,
    pub(crate) t_last: Option<f64>,
    pub(crate) rng: StreamRng,
    scratch: Scratch,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self, ModelError> {
        params.validate()?;
        let rng = StreamRng::from_seed(params.seed);
        Ok(Self::from_parts(params, Vec::new(), None, 0, 0.0, 0, None, rng))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        params: ModelParams,
        mut observers: Vec<Observer>,
        dim: Option<usize>,
        i_lao: u64,
        t_lao: f64,
        points_seen: u64,
        t_last: Option<f64>,
        rng: StreamRng,
    ) -> Self {
        let k = params.k;
        observers.reserve_exact(k.saturating_sub(observers.len()) + 1);
        let scratch = Scratch {
            masses: Vec::with_capacity(k + 1),
            active: Vec::with_capacity(k + 1),
            ranked: Vec::with_capacity(k + 1),
            nearest: Vec::with_capacity(k + 1),
            nearest_active_dist: Vec::with_capacity(k + 1),
            factors: Vec::with_capacity(params.n_bins),
        };
        Model {
            params,
            observers,
            dim,
            i_lao,
            t_lao,
            points_seen,
            t_last,
            rng,
            scratch,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Observers in insertion order (oldest first).
    pub fn observers(&self) -> &[Observer] {
        &self.observers
    }

    pub fn points_seen(&self) -> u64 {
        self.points_seen
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        self.t_last
    }

    /// Feature dimension fixed by the first processed point.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    /// Index and timestamp of the most recently inserted observer.
    pub fn last_added(&self) -> (u64, f64) {
        (self.i_lao, self.t_lao)
    }

    /// Idle threshold: the `q_id` order statistic of the observers' bin-0
    /// masses.
    pub fn threshold(&self) -> Result<f64, ModelError> {
        if self.observers.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        let mut masses = Vec::with_capacity(self.observers.len());
        Ok(threshold_into(&self.observers, self.params.q_id, &mut masses))
    }

    /// Indices of the currently active observers, ascending.
    pub fn active_observers(&self) -> Result<Vec<usize>, ModelError> {
        if self.observers.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        let mut masses = Vec::new();
        let mut flags = Vec::new();
        mark_active(&self.observers, self.params.q_id, &mut masses, &mut flags);
        Ok(flags
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| a.then_some(i))
            .collect())
    }

    /// The `min(x, |pool|)` observers closest to `v`, ascending by distance,
    /// ties resolved oldest first.
    pub fn nearest_observers(&self, v: &[f64], pool: Pool) -> Result<Vec<usize>, ModelError> {
        if self.observers.is_empty() {
            return Err(ModelError::EmptyPool);
        }
        self.check_dim(v)?;
        let mut flags = Vec::new();
        let filter = match pool {
            Pool::All => None,
            Pool::Active => {
                let mut masses = Vec::new();
                mark_active(&self.observers, self.params.q_id, &mut masses, &mut flags);
                Some(flags.as_slice())
            }
        };
        let mut ranked = Vec::new();
        rank_nearest(
            &self.observers,
            v,
            self.params.distance,
            self.params.x,
            filter,
            &mut ranked,
        );
        Ok(ranked.into_iter().map(|(_, i)| i).collect())
    }

    /// Scores `v` against the current model without updating it.
    ///
    /// Returns `(score, warmup, n_active)`.
    pub fn outlier_score(&self, v: &[f64]) -> Result<(f64, bool, usize), ModelError> {
        if self.observers.is_empty() {
            return Ok((0.0, true, 0));
        }
        self.check_dim(v)?;
        let mut masses = Vec::new();
        let mut flags = Vec::new();
        mark_active(&self.observers, self.params.q_id, &mut masses, &mut flags);
        let n_active = flags.iter().filter(|&&a| a).count();
        let mut ranked = Vec::new();
        rank_nearest(
            &self.observers,
            v,
            self.params.distance,
            self.params.x,
            Some(&flags),
            &mut ranked,
        );
        let dists: Vec<f64> = ranked.iter().map(|&(d, _)| d).collect();
        Ok((median_sorted(&dists), false, n_active))
    }

    /// Decays and rotates every coefficient by `dt` and updates `h`.
    pub fn fade(&mut self, dt: f64) -> Result<(), ModelError> {
        if dt.is_nan() || dt < 0.0 {
            return Err(ModelError::NegativeTimeStep(dt));
        }
        let Model {
            params,
            observers,
            scratch,
            ..
        } = self;
        fade_all(observers, params, dt, &mut scratch.factors);
        Ok(())
    }

    /// Adds one observation to every bin of each listed observer.
    pub fn register_observations(&mut self, nearest: &[usize]) {
        register(&mut self.observers, nearest);
    }

    /// Probability of sampling the current point as a new observer, given the
    /// nearest set over all observers. Must be called with a non-empty model.
    pub fn sampling_probability(&self, nearest: &[usize], t: f64) -> f64 {
        sampling_probability(
            &self.params,
            &self.observers,
            nearest,
            t,
            self.points_seen,
            self.i_lao,
            self.t_lao,
        )
    }

    /// Inserts `v` as an observer, evicting the lowest age-normalized mass
    /// (oldest on ties) when the model is full.
    pub fn insert_observer(&mut self, v: &[f64], t: f64, index: u64) {
        if self.observers.len() >= self.params.k {
            let victim = self
                .observers
                .iter()
                .enumerate()
                .fold(None::<(usize, f64)>, |best, (i, o)| {
                    let r = o.normalized_mass();
                    match best {
                        Some((_, br)) if br <= r => best,
                        _ => Some((i, r)),
                    }
                })
                .map(|(i, _)| i)
                .expect("full model has observers");
            self.observers.remove(victim);
        }
        self.observers
            .push(Observer::new(v.to_vec(), self.params.n_bins, t));
        self.i_lao = index;
        self.t_lao = t;
    }

    /// Scores a point and updates the model with it.
    pub fn process(&mut self, v: &[f64], t: f64) -> Result<ScoreRecord, ModelError> {
        if !t.is_finite() {
            return Err(ModelError::NonFinite("timestamp"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite("feature vector"));
        }
        match self.dim {
            Some(d) if d != v.len() => {
                return Err(ModelError::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                })
            }
            _ => {}
        }
        if let Some(prev) = self.t_last {
            if t < prev {
                return Err(ModelError::OutOfOrder { t, previous: prev });
            }
        }
        self.dim = Some(v.len());
        let index = self.points_seen;

        let record = if self.observers.is_empty() {
            self.insert_observer(v, t, index);
            ScoreRecord {
                t,
                score: 0.0,
                warmup: true,
                n_active: 0,
                sampled: true,
            }
        } else {
            let (t_prev, i_lao, t_lao) = (self.t_last.unwrap_or(t), self.i_lao, self.t_lao);
            let Model {
                params,
                observers,
                scratch,
                rng,
                ..
            } = self;
            mark_active(observers, params.q_id, &mut scratch.masses, &mut scratch.active);
            let n_active = scratch.active.iter().filter(|&&a| a).count();

            rank_nearest(observers, v, params.distance, params.x, None, &mut scratch.ranked);
            scratch.nearest.clear();
            scratch.nearest.extend(scratch.ranked.iter().map(|&(_, i)| i));

            rank_nearest(
                observers,
                v,
                params.distance,
                params.x,
                Some(&scratch.active),
                &mut scratch.ranked,
            );
            scratch.nearest_active_dist.clear();
            scratch
                .nearest_active_dist
                .extend(scratch.ranked.iter().map(|&(d, _)| d));
            let score = median_sorted(&scratch.nearest_active_dist);

            let dt = t - t_prev;
            fade_all(observers, params, dt, &mut scratch.factors);
            register(observers, &scratch.nearest);

            let p = sampling_probability(
                params,
                observers,
                &scratch.nearest,
                t,
                index,
                i_lao,
                t_lao,
            );
            let r = rng.uniform();
            let sampled = r <= p;
            if sampled {
                self.insert_observer(v, t, index);
            }
            ScoreRecord {
                t,
                score,
                warmup: false,
                n_active,
                sampled,
            }
        };

        self.points_seen += 1;
        self.t_last = Some(t);
        Ok(record)
    }

    /// Approximate heap footprint of the model state in bytes, counting
    /// allocated capacity rather than length.
    pub fn heap_bytes(&self) -> usize {
        use std::mem::size_of;
        let obs: usize = self
            .observers
            .iter()
            .map(|o| o.position.capacity() * size_of::<f64>() + o.coeffs.capacity() * size_of::<Complex64>())
            .sum();
        let s = &self.scratch;
        obs + self.observers.capacity() * size_of::<Observer>()
            + s.masses.capacity() * size_of::<f64>()
            + s.active.capacity()
            + s.ranked.capacity() * size_of::<(f64, usize)>()
            + s.nearest.capacity() * size_of::<usize>()
            + s.nearest_active_dist.capacity() * size_of::<f64>()
            + s.factors.capacity() * size_of::<Complex64>()
    }

    fn check_dim(&self, v: &[f64]) -> Result<(), ModelError> {
        match self.dim.or_else(|| self.observers.first().map(|o| o.position.len())) {
            Some(d) if d != v.len() => Err(ModelError::DimensionMismatch {
                expected: d,
                got: v.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// `q_id` order statistic of the bin-0 masses: `s[floor(q_id * m)]`, clamped
/// to the largest value.
fn threshold_into(observers: &[Observer], q_id: f64, masses: &mut Vec<f64>) -> f64 {
    masses.clear();
    masses.extend(observers.iter().map(Observer::mass));
    let m = masses.len();
    let idx = ((q_id * m as f64).floor() as usize).min(m - 1);
    let (_, nth, _) = masses.select_nth_unstable_by(idx, f64::total_cmp);
    *nth
}

/// Fills `flags` with the active-set membership of each observer. Falls back
/// to the single most active observer when nothing clears the threshold.
fn mark_active(observers: &[Observer], q_id: f64, masses: &mut Vec<f64>, flags: &mut Vec<bool>) {
    let thr = threshold_into(observers, q_id, masses);
    flags.clear();
    let mut any = false;
    let mut best: Option<(usize, f64)> = None;
    for (i, o) in observers.iter().enumerate() {
        let a = o.activity();
        let on = a >= thr;
        any |= on;
        flags.push(on);
        if best.map_or(true, |(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    if !any {
        if let Some((i, _)) = best {
            flags[i] = true;
        }
    }
}

fn by_distance_then_age(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Leaves the `min(x, |pool|)` nearest `(distance, index)` pairs in `ranked`,
/// sorted ascending.
fn rank_nearest(
    observers: &[Observer],
    v: &[f64],
    distance: Distance,
    x: usize,
    filter: Option<&[bool]>,
    ranked: &mut Vec<(f64, usize)>,
) {
    ranked.clear();
    for (i, o) in observers.iter().enumerate() {
        if filter.map_or(true, |f| f[i]) {
            ranked.push((distance.eval(&o.position, v), i));
        }
    }
    if ranked.len() > x {
        ranked.select_nth_unstable_by(x - 1, by_distance_then_age);
        ranked.truncate(x);
    }
    ranked.sort_unstable_by(by_distance_then_age);
}

fn fade_all(observers: &mut [Observer], params: &ModelParams, dt: f64, factors: &mut Vec<Complex64>) {
    let decay = (-dt / params.t_ewma).exp();
    let cycles = dt / params.t_period;
    factors.clear();
    factors.push(Complex64::new(decay, 0.0));
    for n in 1..params.n_bins {
        let phase = TAU * (n as f64 * cycles).fract();
        let (sin, cos) = phase.sin_cos();
        factors.push(Complex64::new(decay * cos, decay * sin));
    }
    for o in observers.iter_mut() {
        o.h = o.h * decay + 1.0;
        o.coeffs[0].re *= decay;
        for (c, f) in o.coeffs.iter_mut().zip(factors.iter()).skip(1) {
            *c *= *f;
        }
    }
}

fn register(observers: &mut [Observer], nearest: &[usize]) {
    for &i in nearest {
        for c in observers[i].coeffs.iter_mut() {
            c.re += 1.0;
        }
    }
}

fn sampling_probability(
    params: &ModelParams,
    observers: &[Observer],
    nearest: &[usize],
    t: f64,
    index: u64,
    i_lao: u64,
    t_lao: f64,
) -> f64 {
    let local: f64 = nearest.iter().map(|&i| observers[i].mass()).sum();
    let total: f64 = observers.iter().map(Observer::mass).sum();
    let share = if total > 0.0 { local / total } else { 1.0 };
    let k = params.k as f64;
    let steps = index.saturating_sub(i_lao).max(1) as f64;
    let p = k * k / (params.t_ewma * params.x as f64) * share * (t - t_lao) / steps;
    p.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(5, 3, 100.0, 10.0, 4, 0.2).with_seed(7)
    }

    fn observer(pos: &[f64], coeffs: &[(f64, f64)], h: f64) -> Observer {
        Observer {
            position: pos.to_vec(),
            coeffs: coeffs.iter().map(|&(r, i)| Complex64::new(r, i)).collect(),
            h,
            inserted_at: 0.0,
        }
    }

    fn model_with(params: ModelParams, observers: Vec<Observer>) -> Model {
        let dim = observers.first().map(|o| o.position.len());
        let rng = StreamRng::from_seed(params.seed);
        Model::from_parts(params, observers, dim, 0, 0.0, 0, Some(0.0), rng)
    }

    fn dc_model(values: &[f64], q_id: f64) -> Model {
        let obs = values
            .iter()
            .enumerate()
            .map(|(i, &p)| observer(&[i as f64], &[(p, 0.0)], p.max(1.0)))
            .collect();
        model_with(ModelParams { q_id, n_bins: 1, ..params() }, obs)
    }

    #[test]
    fn new_model_is_empty() {
        let m = Model::new(params()).unwrap();
        assert!(m.observers().is_empty());
        assert_eq!(m.last_added(), (0, 0.0));
        assert_eq!(m.points_seen(), 0);
        assert!(matches!(
            Model::new(ModelParams { q_id: 1.5, ..params() }),
            Err(ModelError::InvalidParameter { name: "q_id", .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(dc_model(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.2).threshold().unwrap(), 2.0);
        assert_eq!(dc_model(&[3.0, 1.0, 2.0], 0.0).threshold().unwrap(), 1.0);
        assert_eq!(dc_model(&[3.0, 3.0, 3.0], 0.5).threshold().unwrap(), 3.0);
        assert_eq!(dc_model(&[4.0, 1.0, 9.0], 1.0).threshold().unwrap(), 9.0);
        assert_eq!(Model::new(params()).unwrap().threshold(), Err(ModelError::EmptyModel));
    }

    #[test]
    fn active_set_examples() {
        // Single observer, Re sum 3 against threshold 2.
        let m = model_with(
            ModelParams { n_bins: 2, ..params() },
            vec![observer(&[0.0], &[(2.0, 0.0), (1.0, 0.0)], 2.0)],
        );
        assert_eq!(m.threshold().unwrap(), 2.0);
        assert_eq!(m.active_observers().unwrap(), vec![0]);

        // B is asleep: bin 1 at phase pi cancels its mass.
        let m = model_with(
            ModelParams { n_bins: 2, ..params() },
            vec![
                observer(&[0.0], &[(3.0, 0.0), (0.0, 0.0)], 3.0),
                observer(&[1.0], &[(3.0, 0.0), (-3.0, 0.0)], 3.0),
            ],
        );
        assert_eq!(m.threshold().unwrap(), 3.0);
        assert_eq!(m.active_observers().unwrap(), vec![0]);

        let same = (0..4)
            .map(|i| observer(&[i as f64], &[(2.0, 0.0), (0.5, 0.25)], 2.0))
            .collect();
        let m = model_with(ModelParams { n_bins: 2, ..params() }, same);
        assert_eq!(m.active_observers().unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn active_set_falls_back_to_most_active() {
        // Every Re sum is below the threshold of 4.
        let m = model_with(
            ModelParams { n_bins: 2, q_id: 0.0, ..params() },
            vec![
                observer(&[0.0], &[(4.0, 0.0), (-3.0, 0.0)], 4.0),
                observer(&[1.0], &[(4.0, 0.0), (-1.0, 0.0)], 4.0),
                observer(&[2.0], &[(4.0, 0.0), (-2.0, 0.0)], 4.0),
            ],
        );
        assert_eq!(m.active_observers().unwrap(), vec![1]);
    }

    #[test]
    fn nearest_selection_and_ties() {
        let obs = [9.0, 1.0, 5.0, 2.0]
            .iter()
            .map(|&p| observer(&[p], &[(1.0, 0.0)], 1.0))
            .collect();
        let m = model_with(ModelParams { n_bins: 1, ..params() }, obs);
        assert_eq!(m.nearest_observers(&[0.0], Pool::All).unwrap(), vec![1, 3, 2]);

        let obs = [-1.0, 1.0]
            .iter()
            .map(|&p| observer(&[p], &[(1.0, 0.0)], 1.0))
            .collect();
        let m = model_with(ModelParams { n_bins: 1, x: 1, ..params() }, obs);
        assert_eq!(m.nearest_observers(&[0.0], Pool::All).unwrap(), vec![0]);

        assert_eq!(
            Model::new(params()).unwrap().nearest_observers(&[0.0], Pool::Active),
            Err(ModelError::EmptyPool)
        );
    }

    #[test]
    fn nearest_active_is_capped_by_pool_size() {
        // Two active (mass 5), two idle (mass 1) with q_id 0.5.
        let obs = vec![
            observer(&[0.0], &[(1.0, 0.0)], 1.0),
            observer(&[10.0], &[(5.0, 0.0)], 5.0),
            observer(&[0.5], &[(1.0, 0.0)], 1.0),
            observer(&[20.0], &[(5.0, 0.0)], 5.0),
        ];
        let m = model_with(ModelParams { n_bins: 1, x: 3, q_id: 0.5, ..params() }, obs);
        assert_eq!(m.nearest_observers(&[0.0], Pool::Active).unwrap(), vec![1, 3]);
        let (score, warm, n_active) = m.outlier_score(&[0.0]).unwrap();
        assert_eq!((score, warm, n_active), (15.0, false, 2));
    }

    #[test]
    fn score_medians() {
        let obs = [1.0, 2.0, 5.0]
            .iter()
            .map(|&p| observer(&[p], &[(1.0, 0.0)], 1.0))
            .collect();
        let m = model_with(ModelParams { n_bins: 1, x: 3, ..params() }, obs);
        assert_eq!(m.outlier_score(&[0.0]).unwrap().0, 2.0);

        let obs = [1.0, -3.0]
            .iter()
            .map(|&p| observer(&[p], &[(1.0, 0.0)], 1.0))
            .collect();
        let m = model_with(ModelParams { n_bins: 1, x: 3, ..params() }, obs);
        assert_eq!(m.outlier_score(&[0.0]).unwrap().0, 2.0);

        let obs = vec![observer(&[4.0, 2.0], &[(1.0, 0.0)], 1.0)];
        let m = model_with(ModelParams { n_bins: 1, x: 1, ..params() }, obs);
        assert_eq!(m.outlier_score(&[4.0, 2.0]).unwrap().0, 0.0);

        assert_eq!(Model::new(params()).unwrap().outlier_score(&[1.0]).unwrap(), (0.0, true, 0));
    }

    #[test]
    fn fading_examples() {
        let t = 100.0;
        let t0 = 10.0;
        let mut m = model_with(
            ModelParams { n_bins: 3, t_ewma: t, t_period: t0, ..params() },
            vec![Observer::new(vec![0.0], 3, 0.0)],
        );
        m.fade(t).unwrap();
        let o = &m.observers()[0];
        assert!((o.coeffs[0].re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(o.coeffs[0].im, 0.0);
        assert!((o.h - ((-1.0f64).exp() + 1.0)).abs() < 1e-15);

        // Full period: phase returns, magnitude decays by exp(-T0/T).
        let mut m = model_with(
            ModelParams { n_bins: 3, t_ewma: t, t_period: t0, ..params() },
            vec![Observer::new(vec![0.0], 3, 0.0)],
        );
        m.fade(t0).unwrap();
        let c1 = m.observers()[0].coeffs[1];
        assert!((c1.re - (-0.1f64).exp()).abs() < 1e-15);
        assert!(c1.im.abs() < 1e-15);

        // Quarter turn at bin 2 with negligible decay.
        let mut m = model_with(
            ModelParams { n_bins: 3, t_ewma: 1e300, t_period: t0, ..params() },
            vec![Observer::new(vec![0.0], 3, 0.0)],
        );
        m.fade(t0 / 8.0).unwrap();
        let c2 = m.observers()[0].coeffs[2];
        assert!(c2.re.abs() < 1e-15 && (c2.im - 1.0).abs() < 1e-15);

        assert_eq!(m.fade(-1.0), Err(ModelError::NegativeTimeStep(-1.0)));
    }

    #[test]
    fn register_after_fade() {
        let mut m = model_with(
            ModelParams { n_bins: 2, ..params() },
            vec![
                observer(&[0.0], &[(0.0, 0.0), (0.0, 0.0)], 1.0),
                observer(&[1.0], &[(1.0, 0.0), (0.5, 0.5)], 1.0),
            ],
        );
        m.register_observations(&[0]);
        assert_eq!(m.observers()[0].coeffs, vec![Complex64::new(1.0, 0.0); 2]);
        assert_eq!(m.observers()[1].coeffs[1], Complex64::new(0.5, 0.5));
        let h_before = m.observers()[0].h;
        m.fade(100.0).unwrap();
        m.register_observations(&[0]);
        assert!((m.observers()[0].coeffs[0].re - 1.367_879_441_171_442_2).abs() < 1e-15);
        assert_eq!(m.observers()[0].h, h_before * (-1.0f64).exp() + 1.0);
    }

    #[test]
    fn sampling_probability_unit_case() {
        let t = 100.0;
        let mut m = model_with(
            ModelParams { k: 1, x: 1, t_ewma: t, ..params() },
            vec![Observer::new(vec![0.0], 4, 0.0)],
        );
        m.points_seen = 1;
        assert_eq!(m.sampling_probability(&[0], t), 1.0);
        assert!((m.sampling_probability(&[0], t / 4.0) - 0.25).abs() < 1e-15);
        // Same instant as last insertion.
        assert_eq!(m.sampling_probability(&[0], 0.0), 0.0);
    }

    #[test]
    fn insert_evicts_lowest_normalized_mass() {
        let obs = vec![
            observer(&[0.0], &[(5.0, 0.0)], 10.0),
            observer(&[1.0], &[(8.0, 0.0)], 8.0),
            observer(&[2.0], &[(1.0, 0.0)], 1.0),
        ];
        let mut m = model_with(ModelParams { k: 3, n_bins: 1, ..params() }, obs);
        m.insert_observer(&[3.0], 4.0, 9);
        let pos: Vec<f64> = m.observers().iter().map(|o| o.position[0]).collect();
        assert_eq!(pos, vec![1.0, 2.0, 3.0]);
        assert_eq!(m.last_added(), (9, 4.0));
        let fresh = m.observers().last().unwrap();
        assert_eq!(fresh.normalized_mass(), 1.0);

        // Tie on ratio: oldest goes.
        let obs = vec![
            observer(&[0.0], &[(1.0, 0.0)], 2.0),
            observer(&[1.0], &[(2.0, 0.0)], 4.0),
        ];
        let mut m = model_with(ModelParams { k: 2, n_bins: 1, ..params() }, obs);
        m.insert_observer(&[5.0], 1.0, 1);
        assert_eq!(m.observers()[0].position, vec![1.0]);

        let mut m = Model::new(params()).unwrap();
        m.insert_observer(&[0.0], 0.0, 0);
        assert_eq!(m.observers().len(), 1);
    }

    #[test]
    fn process_bootstrap_and_second_point() {
        let mut m = Model::new(ModelParams { x: 3, ..params() }).unwrap();
        let r = m.process(&[0.0, 0.0], 0.0).unwrap();
        assert_eq!(
            r,
            ScoreRecord { t: 0.0, score: 0.0, warmup: true, n_active: 0, sampled: true }
        );
        assert_eq!(m.observers().len(), 1);
        let r = m.process(&[0.0, 4.0], 1.0).unwrap();
        assert_eq!(r.score, 4.0);
        assert!(!r.warmup);
        assert_eq!(r.n_active, 1);
    }

    #[test]
    fn process_rejects_contract_violations() {
        let mut m = Model::new(params()).unwrap();
        m.process(&[0.0, 0.0], 5.0).unwrap();
        assert_eq!(
            m.process(&[0.0, 0.0], 4.0),
            Err(ModelError::OutOfOrder { t: 4.0, previous: 5.0 })
        );
        assert_eq!(
            m.process(&[0.0], 6.0),
            Err(ModelError::DimensionMismatch { expected: 2, got: 1 })
        );
        assert_eq!(m.process(&[f64::NAN, 0.0], 6.0), Err(ModelError::NonFinite("feature vector")));
        // Rejected points leave the model untouched.
        assert_eq!(m.points_seen(), 1);
        // Equal timestamps are fine.
        assert!(m.process(&[1.0, 0.0], 5.0).is_ok());
    }

    #[test]
    fn equal_seeds_give_identical_series() {
        let run = |seed| {
            let mut m = Model::new(params().with_seed(seed)).unwrap();
            (0..300)
                .map(|i| {
                    let t = i as f64 * 0.7;
                    let v = [(i as f64 * 1.3).sin(), (i as f64 * 0.1).cos()];
                    m.process(&v, t).unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }
}
