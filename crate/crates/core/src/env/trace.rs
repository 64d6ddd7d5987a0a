//! Piecewise-constant success-probability traces.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::EnvError;
use crate::model::{LinkModel, PairMatrix, RateSet};

/// A matrix that applies from step `start` until the next segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSegment {
    pub start: u64,
    pub model: LinkModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    rates: RateSet,
    segments: Vec<TraceSegment>,
    horizon: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceRow {
    start_step: u64,
    channel: usize,
    rate_index: usize,
    theta: f64,
}

impl TraceTable {
    pub fn new(rates: RateSet, segments: Vec<(u64, PairMatrix)>, horizon: u64) -> Result<Self, EnvError> {
        if segments.is_empty() {
            return Err(EnvError::EmptyTrace);
        }
        if segments[0].0 != 0 {
            return Err(EnvError::TraceStart(segments[0].0));
        }
        let channels = segments[0].1.channels();
        let mut out = Vec::with_capacity(segments.len());
        for (i, (start, theta)) in segments.into_iter().enumerate() {
            if i > 0 && start <= out.last().map_or(0, |s: &TraceSegment| s.start) {
                return Err(EnvError::SegmentOrder(start));
            }
            if start >= horizon {
                return Err(EnvError::SegmentPastHorizon { start, horizon });
            }
            if theta.channels() != channels {
                return Err(EnvError::SegmentShape(start));
            }
            out.push(TraceSegment { start, model: LinkModel::new(rates.clone(), theta)? });
        }
        Ok(Self { rates, segments: out, horizon })
    }

    /// A single segment covering `horizon` steps.
    pub fn constant(model: &LinkModel, horizon: u64) -> Result<Self, EnvError> {
        Self::new(model.rates().clone(), vec![(0, model.effective().theta().clone())], horizon)
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn channels(&self) -> usize {
        self.segments[0].model.channels()
    }

    pub fn segments(&self) -> &[TraceSegment] {
        &self.segments
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Same trace with a different horizon; segments starting at or after
    /// it are dropped.
    pub fn with_horizon(&self, horizon: u64) -> Result<Self, EnvError> {
        let segs = self
            .segments
            .iter()
            .filter(|s| s.start < horizon)
            .map(|s| (s.start, s.model.theta().clone()))
            .collect();
        Self::new(self.rates.clone(), segs, horizon)
    }

    /// Parse `start_step,channel,rate_index,theta` rows (1-based indices).
    /// The first segment must list every pair; later segments inherit
    /// unlisted pairs from their predecessor.
    pub fn read_csv(reader: impl Read, rates: RateSet, horizon: u64) -> Result<Self, EnvError> {
        let mut by_start: BTreeMap<u64, Vec<TraceRow>> = BTreeMap::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            let row: TraceRow = row.map_err(|e| EnvError::Csv(e.to_string()))?;
            by_start.entry(row.start_step).or_default().push(row);
        }
        let first = by_start.values().next().ok_or(EnvError::EmptyTrace)?;
        let channels = first.iter().map(|r| r.channel).max().unwrap_or(0);
        let k = rates.len();
        let mut current: Vec<Option<f64>> = vec![None; channels * k];
        let mut segments = Vec::with_capacity(by_start.len());
        for (start, rows) in by_start {
            for r in rows {
                if r.channel == 0 || r.channel > channels || r.rate_index == 0 || r.rate_index > k {
                    return Err(EnvError::TraceIndex { start, channel: r.channel, rate_index: r.rate_index });
                }
                current[(r.channel - 1) * k + r.rate_index - 1] = Some(r.theta);
            }
            if let Some(missing) = current.iter().position(Option::is_none) {
                return Err(EnvError::IncompleteSegment { start, channel: missing / k + 1, rate_index: missing % k + 1 });
            }
            let rows = current.chunks(k).map(|c| c.iter().map(|v| v.unwrap_or(0.0)).collect()).collect();
            segments.push((start, PairMatrix::from_rows(rows)?));
        }
        Self::new(rates, segments, horizon)
    }

    /// Write every segment in full.
    pub fn write_csv(&self, writer: impl Write) -> Result<(), EnvError> {
        let mut w = csv::Writer::from_writer(writer);
        for s in &self.segments {
            for c in 0..s.model.channels() {
                for k in 0..s.model.rate_count() {
                    w.serialize(TraceRow {
                        start_step: s.start,
                        channel: c + 1,
                        rate_index: k + 1,
                        theta: s.model.theta().get(c, k),
                    })
                    .map_err(|e| EnvError::Csv(e.to_string()))?;
                }
            }
        }
        w.flush().map_err(|e| EnvError::Csv(e.to_string()))
    }
}

/// Compress time by `factor`: segment starts and the horizon are divided
/// (rounding down), the horizon is kept at least 1, segments that collapse
/// onto one start keep the later matrix, and segments landing at or past
/// the new horizon are dropped.
pub fn accelerate(trace: &TraceTable, factor: u64) -> TraceTable {
    let factor = factor.max(1);
    let horizon = (trace.horizon / factor).max(1);
    let mut segments: Vec<TraceSegment> = Vec::with_capacity(trace.segments.len());
    for s in &trace.segments {
        let start = s.start / factor;
        if start >= horizon {
            continue;
        }
        match segments.last_mut() {
            Some(last) if last.start == start => last.model = s.model.clone(),
            _ => segments.push(TraceSegment { start, model: s.model.clone() }),
        }
    }
    TraceTable { rates: trace.rates.clone(), segments, horizon }
}
