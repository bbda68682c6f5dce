use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A sampled point retained as a spatial reference, together with the
/// complex EWMA accumulators describing when its neighborhood is populated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observer {
    pub position: Vec<f64>,
    /// One coefficient per frequency bin. Bin 0 is always real.
    pub coeffs: Vec<Complex64>,
    /// Largest bin-0 value this observer could have reached since insertion.
    pub h: f64,
    pub inserted_at: f64,
}

impl Observer {
    /// Fresh observer: every coefficient is `1 + 0j` and `h = 1`.
    pub fn new(position: Vec<f64>, n_bins: usize, inserted_at: f64) -> Self {
        Observer {
            position,
            coeffs: vec![Complex64::new(1.0, 0.0); n_bins],
            h: 1.0,
            inserted_at,
        }
    }

    /// Time-averaged observation mass (bin 0).
    #[inline]
    pub fn mass(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Age-normalized observation mass; the removal criterion.
    #[inline]
    pub fn normalized_mass(&self) -> f64 {
        self.coeffs[0].re / self.h
    }

    /// Inverse transform evaluated at the current stream time.
    ///
    /// This is the activity statistic used to build the active set and is
    /// identical to `temporal_shape(0.0, _)`.
    #[inline]
    pub fn activity(&self) -> f64 {
        self.coeffs.iter().map(|c| c.re).sum()
    }

    /// Reconstructed neighborhood arrival intensity at `t_offset` relative to
    /// the current stream time, using base period `t_period`.
    pub fn temporal_shape(&self, t_offset: f64, t_period: f64) -> f64 {
        if t_offset == 0.0 {
            return self.activity();
        }
        let cycles = t_offset / t_period;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let phase = TAU * (n as f64 * cycles).rem_euclid(1.0);
                let (sin, cos) = phase.sin_cos();
                c.re * cos - c.im * sin
            })
            .sum()
    }

    /// Coefficient magnitudes; bin `n` corresponds to period `T0 / n`.
    pub fn spectrum_magnitude(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_coeffs(coeffs: Vec<Complex64>) -> Observer {
        Observer {
            position: vec![0.0],
            coeffs,
            h: 1.0,
            inserted_at: 0.0,
        }
    }

    #[test]
    fn dc_only_is_constant() {
        let o = with_coeffs(vec![Complex64::new(2.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        for s in [-3.0, 0.0, 0.7, 12.0, 1e6] {
            assert_eq!(o.temporal_shape(s, 10.0), 2.5);
        }
    }

    #[test]
    fn single_bin_cosine_and_sine() {
        let t0 = 10.0;
        let cos_obs = with_coeffs(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let sin_obs = with_coeffs(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]);
        for i in 0..40 {
            let s = i as f64 * 0.37;
            let w = TAU * s / t0;
            assert!((cos_obs.temporal_shape(s, t0) - w.cos()).abs() < 1e-12);
            assert!((sin_obs.temporal_shape(s, t0) + w.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_offset_matches_activity() {
        let o = with_coeffs(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, -0.5),
            Complex64::new(-0.25, 0.3),
        ]);
        assert_eq!(o.temporal_shape(0.0, 4.0), o.activity());
        assert_eq!(o.activity(), 2.75);
    }

    #[test]
    fn spectrum() {
        let o = with_coeffs(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 4.0),
        ]);
        assert_eq!(o.spectrum_magnitude(), vec![3.0, 0.0, 4.0]);
        assert_eq!(Observer::new(vec![1.0], 5, 0.0).spectrum_magnitude(), vec![1.0; 5]);
    }
}
