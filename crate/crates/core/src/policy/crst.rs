use crate::model::{DecisionPair, RateSet};

use super::{display_name, Budget, Core, IndexKind, Policy, PolicyError};
use crate::kl;

/// Channel/rate selection driven by per-channel leaders and a test that
/// decides whether each leader is confidently the best rate on its channel.
#[derive(Debug, Clone)]
pub struct CrsT {
    core: Core,
    budget: Budget,
}

/// Decision state of one round, exposed for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CrsTRound {
    /// Per-channel leader rate.
    pub leaders: Vec<usize>,
    /// Channels whose leader test fails.
    pub undecided: Vec<usize>,
}

impl CrsT {
    pub fn new(rates: &RateSet, channels: usize, window: Option<usize>) -> Result<Self, PolicyError> {
        let budget = match window {
            None => Budget::Transmissions,
            Some(w) => Budget::Fixed(kl::budget(w as u64)),
        };
        Ok(Self { core: Core::new(rates, channels, window)?, budget })
    }

    fn channel_leader(&self, c: usize) -> usize {
        let k = self.core.rate_count();
        let mut best = 0;
        let mut best_mean = self.core.stats(c * k).empirical_mean(self.core.rates()[0]);
        for r in 1..k {
            let m = self.core.stats(c * k + r).empirical_mean(self.core.rates()[r]);
            if m > best_mean {
                best = r;
                best_mean = m;
            }
        }
        best
    }

    fn rate_neighbours(&self, leader: usize) -> impl Iterator<Item = usize> {
        let k = self.core.rate_count();
        [leader.checked_sub(1), Some(leader + 1)].into_iter().flatten().filter(move |&r| r < k)
    }

    /// Leaders and the undecided channels under the current statistics.
    pub fn round(&self) -> CrsTRound {
        let f = self.budget.at(self.core.steps());
        let k = self.core.rate_count();
        let leaders: Vec<usize> = (0..self.core.channels()).map(|c| self.channel_leader(c)).collect();
        let undecided = leaders
            .iter()
            .enumerate()
            .filter(|&(c, &l)| {
                let lower = self.core.lcb(c * k + l, f);
                self.rate_neighbours(l).any(|r| self.core.ucb(c * k + r, f) > lower)
            })
            .map(|(c, _)| c)
            .collect();
        CrsTRound { leaders, undecided }
    }
}

impl Policy for CrsT {
    fn name(&self) -> String {
        display_name(IndexKind::CrsT, self.core.window())
    }

    fn select(&mut self) -> DecisionPair {
        if let Some(p) = self.core.initial_pick() {
            return self.core.commit(p);
        }
        let k = self.core.rate_count();
        let round = self.round();
        let pair = match round.undecided.first() {
            Some(&c) => {
                let l = round.leaders[c];
                let lo = l.saturating_sub(1);
                let hi = (l + 1).min(k - 1);
                let rate = (lo..=hi).min_by_key(|&r| self.core.stats(c * k + r).pulls).expect("nonempty range");
                DecisionPair::new(c, rate)
            }
            None => {
                let f = self.budget.at(self.core.steps());
                let arms = round.leaders.iter().enumerate().map(|(c, &l)| c * k + l);
                DecisionPair::from_arm(self.core.argmax_ucb(arms, f).expect("at least one channel"), k)
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
