use crate::kl;
use crate::model::{DecisionPair, RateSet};

use super::{display_name, Core, IndexKind, Policy, PolicyError};

/// Exploration budget used by the upper index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// `allowance(n)` with `n` completed transmissions.
    Transmissions,
    /// A constant budget, e.g. `allowance(tau)` for a window of size `tau`.
    Fixed(f64),
}

impl Budget {
    pub(crate) fn at(self, steps: u64) -> f64 {
        match self {
            Budget::Transmissions => kl::budget(steps),
            Budget::Fixed(f) => f,
        }
    }
}

/// Plays the pair with the largest KL upper confidence bound on throughput.
#[derive(Debug, Clone)]
pub struct KlUcb {
    core: Core,
    budget: Budget,
}

impl KlUcb {
    pub fn new(rates: &RateSet, channels: usize) -> Result<Self, PolicyError> {
        Self::with_budget(rates, channels, None, Budget::Transmissions)
    }

    /// Sliding-window statistics with the constant budget `allowance(window)`.
    pub fn windowed(rates: &RateSet, channels: usize, window: usize) -> Result<Self, PolicyError> {
        Self::with_budget(rates, channels, Some(window), Budget::Fixed(kl::budget(window as u64)))
    }

    pub fn with_budget(
        rates: &RateSet,
        channels: usize,
        window: Option<usize>,
        budget: Budget,
    ) -> Result<Self, PolicyError> {
        Ok(Self { core: Core::new(rates, channels, window)?, budget })
    }
}

impl Policy for KlUcb {
    fn name(&self) -> String {
        display_name(IndexKind::KlUcb, self.core.window())
    }

    fn select(&mut self) -> DecisionPair {
        let pair = match self.core.initial_pick() {
            Some(p) => p,
            None => {
                let f = self.budget.at(self.core.steps());
                let arm = self.core.argmax_ucb(0..self.core.arms(), f).expect("at least one arm");
                DecisionPair::from_arm(arm, self.core.rate_count())
            }
        };
        self.core.commit(pair)
    }

    fn update(&mut self, pair: DecisionPair, success: bool) -> Result<(), PolicyError> {
        self.core.observe(pair, success).map(|_| ())
    }

    fn reset(&mut self) {
        self.core.reset();
    }

    fn steps(&self) -> u64 {
        self.core.steps()
    }
}
