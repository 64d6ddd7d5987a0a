//! Outcome generators: stationary links, piecewise-constant traces and a
//! synthetic drifting link. All share one [`Environment`] type.

mod drift;
mod tape;
mod trace;

pub use drift::SyntheticDriftSpec;
pub use tape::OutcomeTape;
pub use trace::{accelerate, TraceSegment, TraceTable};

use thiserror::Error;

use crate::model::{DecisionPair, LinkModel, ModelError, OptimaSummary, PairMatrix, RateSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("trace has no segments")]
    EmptyTrace,
    #[error("first segment starts at {0}, expected 0")]
    TraceStart(u64),
    #[error("segment start {0} is not after the previous one")]
    SegmentOrder(u64),
    #[error("segment start {start} is not before the horizon {horizon}")]
    SegmentPastHorizon { start: u64, horizon: u64 },
    #[error("segment at {0} has a different number of channels")]
    SegmentShape(u64),
    #[error("segment at {start}: no value for channel {channel}, rate {rate_index}")]
    IncompleteSegment { start: u64, channel: usize, rate_index: usize },
    #[error("segment at {start}: index (channel {channel}, rate {rate_index}) out of range")]
    TraceIndex { start: u64, channel: usize, rate_index: usize },
    #[error("trace csv: {0}")]
    Csv(String),
    #[error("invalid drift spec: {0}")]
    DriftSpec(String),
    #[error("step {step} is beyond the horizon {horizon}")]
    BeyondHorizon { step: u64, horizon: u64 },
}

#[derive(Debug, Clone)]
struct Segment {
    start: u64,
    model: LinkModel,
    optima: OptimaSummary,
}

/// Success probabilities over time plus a seeded outcome tape.
#[derive(Debug, Clone)]
pub struct Environment {
    rates: RateSet,
    segments: Vec<Segment>,
    /// `None` for a stationary link with no horizon.
    horizon: Option<u64>,
    tape: OutcomeTape,
}

impl Environment {
    pub fn stationary(model: &LinkModel, seed: u64) -> Self {
        let model = model.effective();
        Self {
            rates: model.rates().clone(),
            segments: vec![Segment { start: 0, optima: model.optima(), model }],
            horizon: None,
            tape: OutcomeTape::new(seed),
        }
    }

    pub fn from_trace(trace: &TraceTable, seed: u64) -> Self {
        let segments = trace
            .segments()
            .iter()
            .map(|s| Segment { start: s.start, model: s.model.clone(), optima: s.model.optima() })
            .collect();
        Self { rates: trace.rates().clone(), segments, horizon: Some(trace.horizon()), tape: OutcomeTape::new(seed) }
    }

    /// Drifting link generated from `spec` (its own seed drives the
    /// probabilities), with outcomes drawn from `seed`.
    pub fn from_drift(spec: &SyntheticDriftSpec, seed: u64) -> Result<Self, EnvError> {
        Ok(Self::from_trace(&spec.generate()?, seed))
    }

    /// Same probabilities, different outcome tape.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { tape: OutcomeTape::new(seed), ..self.clone() }
    }

    pub fn seed(&self) -> u64 {
        self.tape.seed()
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn channels(&self) -> usize {
        self.segments[0].model.channels()
    }

    pub fn horizon(&self) -> Option<u64> {
        self.horizon
    }

    pub fn is_stationary(&self) -> bool {
        self.horizon.is_none()
    }

    /// Start steps of the piecewise-constant segments.
    pub fn change_points(&self) -> Vec<u64> {
        self.segments.iter().map(|s| s.start).collect()
    }

    fn segment(&self, n: u64) -> Result<&Segment, EnvError> {
        if let Some(h) = self.horizon {
            if n >= h {
                return Err(EnvError::BeyondHorizon { step: n, horizon: h });
            }
        }
        let idx = self.segments.partition_point(|s| s.start <= n) - 1;
        Ok(&self.segments[idx])
    }

    /// Model in force at step `n` (0-based).
    pub fn model_at(&self, n: u64) -> Result<&LinkModel, EnvError> {
        Ok(&self.segment(n)?.model)
    }

    pub fn theta_at(&self, n: u64) -> Result<&PairMatrix, EnvError> {
        Ok(self.segment(n)?.model.theta())
    }

    pub fn optimum_at(&self, n: u64) -> Result<&OptimaSummary, EnvError> {
        Ok(&self.segment(n)?.optima)
    }

    pub fn best_pair_at(&self, n: u64) -> Result<DecisionPair, EnvError> {
        Ok(self.optimum_at(n)?.best)
    }

    pub fn mu_star_at(&self, n: u64) -> Result<f64, EnvError> {
        Ok(self.optimum_at(n)?.mu_star)
    }

    /// Outcome of transmitting on `pair` at step `n`.
    pub fn draw(&self, pair: DecisionPair, n: u64) -> Result<bool, EnvError> {
        let theta = self.segment(n)?.model.theta().at(pair);
        Ok(self.tape.draw(pair.arm(self.rates.len()), n, theta))
    }

    /// Lengths of the segments clipped to `[0, until)`.
    fn spans(&self, until: u64) -> impl Iterator<Item = (&Segment, u64)> {
        let ends: Vec<u64> = self.segments.iter().skip(1).map(|s| s.start).chain([u64::MAX]).collect();
        self.segments.iter().zip(ends).filter_map(move |(s, end)| {
            let end = end.min(until);
            (end > s.start).then(|| (s, end - s.start))
        })
    }

    /// `sum_{n < until} mu*(n)`.
    pub fn oracle_reward(&self, until: u64) -> f64 {
        self.spans(until).map(|(s, len)| s.optima.mu_star * len as f64).sum()
    }

    /// Best fixed pair in hindsight over `[0, until)` and its expected
    /// cumulative reward.
    pub fn static_best(&self, until: u64) -> (DecisionPair, f64) {
        let k = self.rates.len();
        let arms = self.channels() * k;
        let mut totals = vec![0.0; arms];
        for (s, len) in self.spans(until) {
            for (t, &mu) in totals.iter_mut().zip(s.optima.mu.values()) {
                *t += mu * len as f64;
            }
        }
        let mut best = 0;
        for a in 1..arms {
            if totals[a] > totals[best] {
                best = a;
            }
        }
        (DecisionPair::from_arm(best, k), totals[best])
    }

    /// Expected throughput of `pair` at step `n`.
    pub fn mean_at(&self, pair: DecisionPair, n: u64) -> Result<f64, EnvError> {
        Ok(self.segment(n)?.optima.mu.at(pair))
    }
}
