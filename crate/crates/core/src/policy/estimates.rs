//! Statistics backends shared by the index policies: full history or a
//! sliding window, plus the leader tally used by KL-UCB-U.

use std::collections::VecDeque;

use crate::stats::{ArmStats, StatsError, WindowStats};

#[derive(Debug, Clone)]
pub(crate) enum Estimates {
    Full(Vec<ArmStats>),
    Window(WindowStats),
}

impl Estimates {
    pub(crate) fn new(arms: usize, channels: usize, rate_count: usize, window: Option<usize>) -> Result<Self, StatsError> {
        Ok(match window {
            None => Estimates::Full(vec![ArmStats::default(); arms]),
            Some(w) => Estimates::Window(WindowStats::new(w, channels, rate_count)?),
        })
    }

    #[inline]
    pub(crate) fn arm(&self, arm: usize) -> ArmStats {
        match self {
            Estimates::Full(v) => v[arm],
            Estimates::Window(w) => w.arm(arm),
        }
    }

    pub(crate) fn record(&mut self, arm: usize, success: bool) {
        match self {
            Estimates::Full(v) => v[arm].record(success),
            Estimates::Window(w) => w.record_arm(arm, success),
        }
    }

    pub(crate) fn clear(&mut self) {
        match self {
            Estimates::Full(v) => v.iter_mut().for_each(|a| *a = ArmStats::default()),
            Estimates::Window(w) => w.clear(),
        }
    }

    pub(crate) fn window(&self) -> Option<usize> {
        match self {
            Estimates::Full(_) => None,
            Estimates::Window(w) => Some(w.window()),
        }
    }

    /// Arm with the largest empirical throughput, smallest index on ties.
    pub(crate) fn leader(&self, rates: &[f64]) -> usize {
        let k = rates.len();
        let mut best = 0;
        let mut best_mean = self.arm(0).empirical_mean(rates[0]);
        for arm in 1..self.len() {
            let m = self.arm(arm).empirical_mean(rates[arm % k]);
            if m > best_mean {
                best = arm;
                best_mean = m;
            }
        }
        best
    }

    fn len(&self) -> usize {
        match self {
            Estimates::Full(v) => v.len(),
            Estimates::Window(w) => w.arm_count(),
        }
    }
}

/// How many times each arm has been the global leader, either since the
/// start or within the last `window` steps.
#[derive(Debug, Clone)]
pub(crate) enum LeaderTally {
    Full(Vec<u64>),
    Window { window: usize, recent: VecDeque<usize>, counts: Vec<u64> },
}

impl LeaderTally {
    pub(crate) fn new(arms: usize, window: Option<usize>) -> Self {
        match window {
            None => LeaderTally::Full(vec![0; arms]),
            Some(w) => LeaderTally::Window { window: w, recent: VecDeque::new(), counts: vec![0; arms] },
        }
    }

    pub(crate) fn push(&mut self, leader: usize) {
        match self {
            LeaderTally::Full(c) => c[leader] += 1,
            LeaderTally::Window { window, recent, counts } => {
                if recent.len() == *window {
                    if let Some(old) = recent.pop_front() {
                        counts[old] -= 1;
                    }
                }
                recent.push_back(leader);
                counts[leader] += 1;
            }
        }
    }

    pub(crate) fn count(&self, arm: usize) -> u64 {
        match self {
            LeaderTally::Full(c) => c[arm],
            LeaderTally::Window { counts, .. } => counts[arm],
        }
    }

    pub(crate) fn clear(&mut self) {
        match self {
            LeaderTally::Full(c) => c.iter_mut().for_each(|x| *x = 0),
            LeaderTally::Window { recent, counts, .. } => {
                recent.clear();
                counts.iter_mut().for_each(|x| *x = 0);
            }
        }
    }
}
