use crate::graph::NeighborhoodGraph;
use crate::kl;
use crate::model::{DecisionPair, RateSet};

use super::estimates::LeaderTally;
use super::{display_name, Core, IndexKind, Policy, PolicyError};

/// Unimodal KL-UCB: restricts exploration to the graph neighbourhood of the
/// current empirical leader and plays the leader itself every `gamma`-th
/// time it leads.
#[derive(Debug, Clone)]
pub struct KlUcbU {
    core: Core,
    graph: NeighborhoodGraph,
    tally: LeaderTally,
    leader: usize,
    /// Candidate set is `N(l)` only instead of `N(l) ∪ {l}`.
    strict: bool,
}

impl KlUcbU {
    pub fn new(rates: &RateSet, channels: usize, window: Option<usize>, strict: bool) -> Result<Self, PolicyError> {
        let core = Core::new(rates, channels, window)?;
        let arms = core.arms();
        Ok(Self {
            graph: NeighborhoodGraph::build(channels, rates.len()),
            tally: LeaderTally::new(arms, window),
            leader: 0,
            core,
            strict,
        })
    }

    pub fn gamma(&self) -> usize {
        self.graph.gamma()
    }

    /// Current global leader.
    pub fn leader(&self) -> DecisionPair {
        DecisionPair::from_arm(self.leader, self.core.rate_count())
    }

    /// Number of times the current leader has led (within the window if any).
    pub fn leader_count(&self) -> u64 {
        self.tally.count(self.leader)
    }
}

impl Policy for KlUcbU {
    fn name(&self) -> String {
        let base = display_name(IndexKind::KlUcbU, self.core.window());
        if self.strict {
            format!("{base}[strict]")
        } else {
            base
        }
    }

    fn select(&mut self) -> DecisionPair {
        if let Some(p) = self.core.initial_pick() {
            return self.core.commit(p);
        }
        let k = self.core.rate_count();
        let leader = self.leader();
        let v = self.tally.count(self.leader).max(1);
        let gamma = self.graph.gamma() as u64;
        if gamma == 0 || (v - 1).is_multiple_of(gamma) {
            return self.core.commit(leader);
        }
        let f = kl::budget(v);
        let own = (!self.strict).then_some(self.leader);
        let mut candidates: Vec<usize> = self.graph.neighbors(leader).iter().map(|d| d.arm(k)).chain(own).collect();
        candidates.sort_unstable();
        let arm = self.core.argmax_ucb(candidates, f).unwrap_or(self.leader);
        self.core.commit(DecisionPair::from_arm(arm, k))
    }

    fn update(&mut self, pair: DecisionPair, success: bool) -> Result<(), PolicyError> {
        self.core.observe(pair, success)?;
        self.leader = self.core.leader();
        self.tally.push(self.leader);
        Ok(())
    }

    fn reset(&mut self) {
        self.core.reset();
        self.tally.clear();
        self.leader = 0;
    }

    fn steps(&self) -> u64 {
        self.core.steps()
    }
}
