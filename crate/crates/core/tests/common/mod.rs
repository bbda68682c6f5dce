#![allow(dead_code)]

pub mod naive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdooop::ModelParams;

/// A randomized small configuration and stream for oracle comparisons.
pub struct Case {
    pub params: ModelParams,
    pub stream: Vec<(Vec<f64>, f64)>,
}

pub fn random_case(seed: u64, max_len: usize) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let dim = rng.random_range(1..=4);
    let k = rng.random_range(1..=20);
    let x = rng.random_range(1..=k.min(7) + 1);
    let n_bins = rng.random_range(1..=8);
    let q_id = [0.0, 0.1, 0.2, 0.3, 0.5, 1.0][rng.random_range(0..6)];
    let t0 = rng.random_range(5.0..50.0);
    let t_ewma = t0 * rng.random_range(2.0..20.0);
    let params = ModelParams::new(k, x, t_ewma, t0, n_bins, q_id).with_seed(seed);

    let n = rng.random_range(max_len / 2..=max_len);
    let centers: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let mut t = rng.random_range(0.0..100.0);
    let mut stream = Vec::with_capacity(n);
    for _ in 0..n {
        // Occasional bursts with equal timestamps.
        if rng.random::<f64>() > 0.1 {
            t += rng.random_range(0.0..2.0);
        }
        let phase = (t / t0).rem_euclid(1.0);
        let c = if rng.random::<f64>() < 0.05 {
            None
        } else if phase < 0.5 {
            Some(0)
        } else {
            Some(1 + rng.random_range(0..2))
        };
        let v = match c {
            Some(c) => centers[c].iter().map(|m| m + rng.random_range(-0.5..0.5)).collect(),
            None => (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect(),
        };
        stream.push((v, t));
    }
    Case { params, stream }
}

pub fn naive_for(p: &ModelParams) -> naive::NaiveModel {
    naive::NaiveModel::new(p.k, p.x, p.t_ewma, p.t_period, p.n_bins, p.q_id, p.seed)
}

/// Homogeneous Poisson arrivals of a single Gaussian blob.
pub fn stationary_stream(seed: u64, rate: f64, duration: f64, dim: usize) -> impl Iterator<Item = (Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    std::iter::from_fn(move || {
        t += -(1.0 - rng.random::<f64>()).ln() / rate;
        if t >= duration {
            return None;
        }
        let v: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
        Some((v, t))
    })
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Arrivals of an inhomogeneous Poisson process with intensity `rate(t)`
/// bounded by `rate_max`, by thinning.
pub fn thinned_arrivals<'a>(
    seed: u64,
    rate_max: f64,
    duration: f64,
    rate: impl Fn(f64) -> f64 + 'a,
) -> impl Iterator<Item = f64> + 'a {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    std::iter::from_fn(move || loop {
        t += -(1.0 - rng.random::<f64>()).ln() / rate_max;
        if t >= duration {
            return None;
        }
        if rng.random::<f64>() * rate_max < rate(t) {
            return Some(t);
        }
    })
}
