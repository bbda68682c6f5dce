//! Literal, index-free rendering of the per-point update used as a reference.
//! Shares nothing with the library except the documented RNG contract
//! (ChaCha8 seeded via `seed_from_u64`, one `f64` draw per point once the
//! model is non-empty).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct NaiveObserver {
    pub pos: Vec<f64>,
    pub p: Vec<Complex64>,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NaiveRecord {
    pub score: f64,
    pub warmup: bool,
    pub n_active: usize,
    pub sampled: bool,
}

pub struct NaiveModel {
    pub k: usize,
    pub x: usize,
    pub t_ewma: f64,
    pub t0: f64,
    pub bins: usize,
    pub q_id: f64,
    pub omega: Vec<NaiveObserver>,
    i: u64,
    i_lao: u64,
    t_lao: f64,
    t_prev: f64,
    rng: ChaCha8Rng,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..a.len() {
        s += (a[j] - b[j]) * (a[j] - b[j]);
    }
    s.sqrt()
}

impl NaiveModel {
    pub fn new(k: usize, x: usize, t_ewma: f64, t0: f64, bins: usize, q_id: f64, seed: u64) -> Self {
        NaiveModel {
            k,
            x,
            t_ewma,
            t0,
            bins,
            q_id,
            omega: Vec::new(),
            i: 0,
            i_lao: 0,
            t_lao: 0.0,
            t_prev: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Largest rho from the P0 multiset with |{P0 < rho}| <= q_id * |Omega|.
    pub fn p_thr(&self) -> f64 {
        let m = self.omega.len() as f64;
        let mut best = f64::NEG_INFINITY;
        for cand in &self.omega {
            let rho = cand.p[0].re;
            let below = self.omega.iter().filter(|o| o.p[0].re < rho).count() as f64;
            if below <= self.q_id * m && rho > best {
                best = rho;
            }
        }
        best
    }

    pub fn active(&self) -> Vec<bool> {
        let thr = self.p_thr();
        let sums: Vec<f64> = self
            .omega
            .iter()
            .map(|o| o.p.iter().map(|c| c.re).sum::<f64>())
            .collect();
        let mut act: Vec<bool> = sums.iter().map(|&s| s >= thr).collect();
        if !act.iter().any(|&a| a) {
            let mut best = 0;
            for j in 1..sums.len() {
                if sums[j] > sums[best] {
                    best = j;
                }
            }
            act[best] = true;
        }
        act
    }

    fn nearest(&self, v: &[f64], allowed: &[bool]) -> Vec<(f64, usize)> {
        let mut all: Vec<(f64, usize)> = (0..self.omega.len())
            .filter(|&j| allowed[j])
            .map(|j| (euclid(&self.omega[j].pos, v), j))
            .collect();
        // Stable: equal distances keep insertion order.
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        all.truncate(self.x.min(all.len()));
        all
    }

    pub fn process(&mut self, v: &[f64], t: f64) -> NaiveRecord {
        let rec;
        if self.omega.is_empty() {
            rec = NaiveRecord { score: 0.0, warmup: true, n_active: 0, sampled: true };
            self.add(v, t);
        } else {
            // line 1
            let everyone = vec![true; self.omega.len()];
            let n_set = self.nearest(v, &everyone);
            let act = self.active();
            let na_set = self.nearest(v, &act);
            // line 2
            let d: Vec<f64> = na_set.iter().map(|p| p.0).collect();
            let score = if d.len() % 2 == 1 {
                d[d.len() / 2]
            } else {
                (d[d.len() / 2 - 1] + d[d.len() / 2]) / 2.0
            };
            // lines 3-4
            let dt = t - self.t_prev;
            for o in self.omega.iter_mut() {
                o.h = o.h * (-dt / self.t_ewma).exp() + 1.0;
                for n in 0..self.bins {
                    let w = Complex64::new(-dt / self.t_ewma, n as f64 * 2.0 * std::f64::consts::PI * dt / self.t0);
                    o.p[n] *= w.exp();
                }
                o.p[0].im = 0.0;
            }
            // line 5
            for &(_, j) in &n_set {
                for n in 0..self.bins {
                    self.omega[j].p[n] += 1.0;
                }
            }
            // line 6
            let sum_n: f64 = n_set.iter().map(|&(_, j)| self.omega[j].p[0].re).sum();
            let sum_all: f64 = self.omega.iter().map(|o| o.p[0].re).sum();
            let kk = self.k as f64;
            let steps = (self.i - self.i_lao).max(1) as f64;
            let prob = kk * kk / (self.t_ewma * self.x as f64) * (sum_n / sum_all) * (t - self.t_lao) / steps;
            let r: f64 = self.rng.random();
            let sampled = r <= prob.min(1.0);
            if sampled {
                // line 7
                if self.omega.len() == self.k {
                    let mut worst = 0;
                    for j in 1..self.omega.len() {
                        if self.omega[j].p[0].re / self.omega[j].h < self.omega[worst].p[0].re / self.omega[worst].h {
                            worst = j;
                        }
                    }
                    self.omega.remove(worst);
                }
                // lines 8-9
                self.add(v, t);
            }
            rec = NaiveRecord {
                score,
                warmup: false,
                n_active: act.iter().filter(|&&a| a).count(),
                sampled,
            };
        }
        self.i += 1;
        self.t_prev = t;
        rec
    }

    fn add(&mut self, v: &[f64], t: f64) {
        self.omega.push(NaiveObserver {
            pos: v.to_vec(),
            p: vec![Complex64::new(1.0, 0.0); self.bins],
            h: 1.0,
        });
        self.i_lao = self.i;
        self.t_lao = t;
    }
}
