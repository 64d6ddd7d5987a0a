//! Sequential (channel, rate) selection policies.
//!
//! Every policy alternates `select` and `update`. The first `C*K` selections
//! sweep all pairs in row-major order; afterwards each policy applies its
//! own index rule. Ties always go to the smallest (channel, rate).

mod crst;
mod estimates;
mod klucb;
mod klucbu;

pub use crst::{CrsT, CrsTRound};
pub use klucb::{Budget, KlUcb};
pub use klucbu::KlUcbU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kl;
use crate::model::{DecisionPair, RateSet};
use crate::stats::{ArmStats, StatsError};
use estimates::Estimates;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("update for {got} but the last selection was {expected}")]
    UnexpectedPair { expected: DecisionPair, got: DecisionPair },
    #[error("update for {0} without a pending selection")]
    NoPendingSelection(DecisionPair),
    #[error("a policy needs at least one channel")]
    NoChannels,
    #[error(transparent)]
    Stats(#[from] StatsError),
}

pub trait Policy {
    fn name(&self) -> String;
    /// Pair for the next transmission.
    fn select(&mut self) -> DecisionPair;
    /// Feed back the outcome of the pair returned by the last `select`.
    fn update(&mut self, pair: DecisionPair, success: bool) -> Result<(), PolicyError>;
    fn reset(&mut self);
    /// Number of completed transmissions.
    fn steps(&self) -> u64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexKind {
    #[serde(rename = "kl-ucb")]
    KlUcb,
    #[serde(rename = "crs-t")]
    CrsT,
    #[serde(rename = "kl-ucb-u")]
    KlUcbU,
}

impl IndexKind {
    pub fn label(self) -> &'static str {
        match self {
            IndexKind::KlUcb => "KL-UCB",
            IndexKind::CrsT => "CRS-T",
            IndexKind::KlUcbU => "KL-UCB-U",
        }
    }
}

/// Any of the three index policies, optionally windowed.
#[derive(Debug, Clone)]
pub enum IndexPolicy {
    KlUcb(KlUcb),
    CrsT(CrsT),
    KlUcbU(KlUcbU),
}

/// Build a policy. `window` switches to sliding-window statistics; `strict`
/// only affects KL-UCB-U (candidate set excludes the leader).
pub fn make_policy(
    kind: IndexKind,
    rates: &RateSet,
    channels: usize,
    window: Option<usize>,
    strict: bool,
) -> Result<IndexPolicy, PolicyError> {
    Ok(match kind {
        IndexKind::KlUcb => IndexPolicy::KlUcb(match window {
            None => KlUcb::new(rates, channels)?,
            Some(w) => KlUcb::windowed(rates, channels, w)?,
        }),
        IndexKind::CrsT => IndexPolicy::CrsT(CrsT::new(rates, channels, window)?),
        IndexKind::KlUcbU => IndexPolicy::KlUcbU(KlUcbU::new(rates, channels, window, strict)?),
    })
}

/// Sliding-window variant of `kind` with window `tau`.
pub fn make_windowed(kind: IndexKind, tau: usize, rates: &RateSet, channels: usize) -> Result<IndexPolicy, PolicyError> {
    make_policy(kind, rates, channels, Some(tau), false)
}

macro_rules! dispatch {
    ($self:ident, $p:ident => $e:expr) => {
        match $self {
            IndexPolicy::KlUcb($p) => $e,
            IndexPolicy::CrsT($p) => $e,
            IndexPolicy::KlUcbU($p) => $e,
        }
    };
}

impl Policy for IndexPolicy {
    fn name(&self) -> String {
        dispatch!(self, p => p.name())
    }
    fn select(&mut self) -> DecisionPair {
        dispatch!(self, p => p.select())
    }
    fn update(&mut self, pair: DecisionPair, success: bool) -> Result<(), PolicyError> {
        dispatch!(self, p => p.update(pair, success))
    }
    fn reset(&mut self) {
        dispatch!(self, p => p.reset())
    }
    fn steps(&self) -> u64 {
        dispatch!(self, p => p.steps())
    }
}

/// Bookkeeping common to all index policies.
#[derive(Debug, Clone)]
pub(crate) struct Core {
    rates: Vec<f64>,
    channels: usize,
    stats: Estimates,
    steps: u64,
    pending: Option<DecisionPair>,
}

impl Core {
    pub(crate) fn new(rates: &RateSet, channels: usize, window: Option<usize>) -> Result<Self, PolicyError> {
        if channels == 0 {
            return Err(PolicyError::NoChannels);
        }
        let k = rates.len();
        Ok(Self {
            rates: rates.as_slice().to_vec(),
            channels,
            stats: Estimates::new(channels * k, channels, k, window)?,
            steps: 0,
            pending: None,
        })
    }

    #[inline]
    pub(crate) fn rate_count(&self) -> usize {
        self.rates.len()
    }

    pub(crate) fn channels(&self) -> usize {
        self.channels
    }

    pub(crate) fn arms(&self) -> usize {
        self.channels * self.rates.len()
    }

    #[inline]
    pub(crate) fn rate_of(&self, arm: usize) -> f64 {
        self.rates[arm % self.rates.len()]
    }

    pub(crate) fn rates(&self) -> &[f64] {
        &self.rates
    }

    #[inline]
    pub(crate) fn stats(&self, arm: usize) -> ArmStats {
        self.stats.arm(arm)
    }

    pub(crate) fn window(&self) -> Option<usize> {
        self.stats.window()
    }

    pub(crate) fn steps(&self) -> u64 {
        self.steps
    }

    /// Round-robin pair while the initial sweep is still running.
    pub(crate) fn initial_pick(&self) -> Option<DecisionPair> {
        let n = self.steps as usize;
        (n < self.arms()).then(|| DecisionPair::from_arm(n, self.rate_count()))
    }

    pub(crate) fn commit(&mut self, pair: DecisionPair) -> DecisionPair {
        self.pending = Some(pair);
        pair
    }

    /// Record an outcome and return the arm it belongs to.
    pub(crate) fn observe(&mut self, pair: DecisionPair, success: bool) -> Result<usize, PolicyError> {
        match self.pending {
            None => return Err(PolicyError::NoPendingSelection(pair)),
            Some(expected) if expected != pair => return Err(PolicyError::UnexpectedPair { expected, got: pair }),
            _ => {}
        }
        self.pending = None;
        let arm = pair.arm(self.rate_count());
        self.stats.record(arm, success);
        self.steps += 1;
        Ok(arm)
    }

    pub(crate) fn reset(&mut self) {
        self.stats.clear();
        self.steps = 0;
        self.pending = None;
    }

    pub(crate) fn leader(&self) -> usize {
        self.stats.leader(&self.rates)
    }

    pub(crate) fn ucb(&self, arm: usize, budget: f64) -> f64 {
        kl::ucb_index(&self.stats(arm), self.rate_of(arm), budget)
    }

    pub(crate) fn lcb(&self, arm: usize, budget: f64) -> f64 {
        kl::lcb_index(&self.stats(arm), self.rate_of(arm), budget)
    }

    /// First arm (in the given order) with the largest upper index. Arms
    /// that provably cannot beat the running best are skipped without
    /// solving for their index.
    pub(crate) fn argmax_ucb(&self, arms: impl IntoIterator<Item = usize>, budget: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for arm in arms {
            let rate = self.rate_of(arm);
            if let Some((_, level)) = best {
                if rate <= level || !kl::upper_index_reaches(&self.stats(arm), rate, budget, level) {
                    continue;
                }
            }
            let q = self.ucb(arm, budget);
            if best.is_none_or(|(_, level)| q > level) {
                best = Some((arm, q));
            }
        }
        best.map(|(arm, _)| arm)
    }
}

fn window_suffix(window: Option<usize>) -> String {
    window.map_or_else(String::new, |w| format!("(tau={w})"))
}

pub(crate) fn display_name(kind: IndexKind, window: Option<usize>) -> String {
    match window {
        None => kind.label().to_string(),
        Some(_) => format!("SW-{}{}", kind.label(), window_suffix(window)),
    }
}
