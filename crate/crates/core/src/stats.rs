//! Full-history and sliding-window arm statistics.

use std::collections::VecDeque;

use thiserror::Error;

use crate::kl;
use crate::model::DecisionPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("window size must be at least 1")]
    EmptyWindow,
}

/// Pull and success counts of one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArmStats {
    pub pulls: u64,
    pub successes: u64,
}

impl ArmStats {
    pub fn record(&mut self, success: bool) {
        self.pulls += 1;
        self.successes += success as u64;
    }

    /// Empirical success frequency; 0 for an unexplored arm.
    #[inline]
    pub fn success_ratio(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.successes as f64 / self.pulls as f64
        }
    }

    /// Empirical throughput `r * successes / pulls`; 0 for an unexplored arm.
    #[inline]
    pub fn empirical_mean(&self, rate: f64) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            rate * (self.successes as f64 / self.pulls as f64)
        }
    }
}

/// Statistics over the last `window` transmissions.
#[derive(Debug, Clone)]
pub struct WindowStats {
    window: usize,
    rate_count: usize,
    slots: VecDeque<Option<(usize, bool)>>,
    arms: Vec<ArmStats>,
}

impl WindowStats {
    pub fn new(window: usize, channels: usize, rate_count: usize) -> Result<Self, StatsError> {
        if window == 0 {
            return Err(StatsError::EmptyWindow);
        }
        Ok(Self {
            window,
            rate_count,
            slots: VecDeque::with_capacity(window.min(1 << 16)),
            arms: vec![ArmStats::default(); channels * rate_count],
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    fn push_slot(&mut self, slot: Option<(usize, bool)>) {
        if self.slots.len() == self.window {
            if let Some(Some((arm, ok))) = self.slots.pop_front() {
                let s = &mut self.arms[arm];
                s.pulls -= 1;
                s.successes -= ok as u64;
            }
        }
        if let Some((arm, ok)) = slot {
            self.arms[arm].record(ok);
        }
        self.slots.push_back(slot);
    }

    pub fn record_arm(&mut self, arm: usize, success: bool) {
        self.push_slot(Some((arm, success)));
    }

    pub fn record(&mut self, pair: DecisionPair, success: bool) {
        self.record_arm(pair.arm(self.rate_count), success);
    }

    /// A step in which nothing was transmitted.
    pub fn record_idle(&mut self) {
        self.push_slot(None);
    }

    #[inline]
    pub fn arm(&self, arm: usize) -> ArmStats {
        self.arms[arm]
    }

    pub fn pair(&self, pair: DecisionPair) -> ArmStats {
        self.arms[pair.arm(self.rate_count)]
    }

    /// Sum of windowed pull counts; equals the number of occupied slots.
    pub fn total_pulls(&self) -> u64 {
        self.arms.iter().map(|a| a.pulls).sum()
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    pub fn occupied(&self) -> usize {
        self.slots.len()
    }

    pub fn clear(&mut self) {
        self.slots.clear();
        self.arms.iter_mut().for_each(|a| *a = ArmStats::default());
    }
}

/// Windowed upper index `q^tau` with budget `allowance(tau)`.
pub fn window_ucb_index(ws: &WindowStats, pair: DecisionPair, rate: f64) -> f64 {
    kl::ucb_index(&ws.pair(pair), rate, kl::budget(ws.window() as u64))
}
