//! Synthetic slowly varying links: each channel carries a latent quality
//! that follows a reflected Gaussian random walk, and the success
//! probability at rate `k` is a logistic function of quality minus a
//! per-rate threshold. Thresholds increase with the rate, so every row is
//! nonincreasing in `k` at every step.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::trace::TraceTable;
use super::EnvError;
use crate::model::{PairMatrix, RateSet};

fn default_steepness() -> f64 {
    8.0
}

fn default_update_every() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticDriftSpec {
    pub rates: Vec<f64>,
    pub channels: usize,
    pub horizon: u64,
    pub seed: u64,
    /// Standard deviation of one random-walk increment.
    pub step_std: f64,
    /// Reflection bounds of the latent quality.
    pub lower: f64,
    pub upper: f64,
    /// Starting quality per channel; defaults to evenly spread values.
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    /// Per-rate thresholds (nondecreasing); defaults to an even grid over
    /// `[lower, upper]`.
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default = "default_steepness")]
    pub steepness: f64,
    /// Steps between two random-walk moves.
    #[serde(default = "default_update_every")]
    pub update_every: u64,
}

fn reflect(mut x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    let period = 2.0 * width;
    x = (x - lo).rem_euclid(period);
    if x > width {
        x = period - x;
    }
    lo + x
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl SyntheticDriftSpec {
    fn validate(&self) -> Result<(RateSet, Vec<f64>, Vec<f64>), EnvError> {
        let rates = RateSet::new(self.rates.clone())?;
        let bad = |m: &str| Err(EnvError::DriftSpec(m.to_string()));
        if self.channels == 0 {
            return bad("channels must be at least 1");
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1");
        }
        if !(self.step_std >= 0.0 && self.step_std.is_finite()) {
            return bad("step_std must be finite and nonnegative");
        }
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper) {
            return bad("need finite lower <= upper");
        }
        if !(self.steepness > 0.0 && self.steepness.is_finite()) {
            return bad("steepness must be positive");
        }
        if self.update_every == 0 {
            return bad("update_every must be at least 1");
        }
        let k = rates.len();
        let thresholds = match &self.thresholds {
            Some(t) if t.len() != k => return bad("one threshold per rate is required"),
            Some(t) if t.windows(2).any(|w| w[1] < w[0]) => return bad("thresholds must be nondecreasing"),
            Some(t) => t.clone(),
            None if k == 1 => vec![(self.lower + self.upper) / 2.0],
            None => (0..k).map(|i| self.lower + (self.upper - self.lower) * i as f64 / (k - 1) as f64).collect(),
        };
        let initial = match &self.initial {
            Some(v) if v.len() != self.channels => return bad("one initial quality per channel is required"),
            Some(v) => v.iter().map(|&x| reflect(x, self.lower, self.upper)).collect(),
            None => (0..self.channels)
                .map(|c| self.lower + (self.upper - self.lower) * (c as f64 + 1.0) / (self.channels as f64 + 1.0))
                .collect(),
        };
        Ok((rates, thresholds, initial))
    }

    fn matrix(&self, quality: &[f64], thresholds: &[f64]) -> PairMatrix {
        let rows = quality
            .iter()
            .map(|&x| thresholds.iter().map(|&t| logistic(self.steepness * (x - t))).collect())
            .collect();
        PairMatrix::from_rows(rows).expect("rectangular")
    }

    /// Piecewise-constant trace of the drifting link; consecutive equal
    /// matrices are merged.
    pub fn generate(&self) -> Result<TraceTable, EnvError> {
        let (rates, thresholds, mut quality) = self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let noise = Normal::new(0.0, self.step_std).map_err(|e| EnvError::DriftSpec(e.to_string()))?;
        let mut segments: Vec<(u64, PairMatrix)> = vec![(0, self.matrix(&quality, &thresholds))];
        let mut start = self.update_every;
        while start < self.horizon {
            for x in quality.iter_mut() {
                *x = reflect(*x + noise.sample(&mut rng), self.lower, self.upper);
            }
            let m = self.matrix(&quality, &thresholds);
            if segments.last().is_some_and(|(_, prev)| *prev != m) {
                segments.push((start, m));
            }
            start += self.update_every;
        }
        TraceTable::new(rates, segments, self.horizon)
    }
}
