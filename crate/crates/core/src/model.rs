//! Static problem description: the rate ladder, the success-probability
//! matrix and everything derived from them (throughputs, optima and the
//! rate-index sets used by the regret bounds).
//!
//! Channel and rate indices are 0-based in code. Every file format and
//! report emitted by the crate uses 1-based indices.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("rate set is empty")]
    EmptyRates,
    #[error("rate r_{index} = {value} must be positive and finite")]
    InvalidRate { index: usize, value: f64 },
    #[error("rates must be strictly increasing: r_{index} = {value} does not exceed {previous}")]
    RatesNotIncreasing { index: usize, value: f64, previous: f64 },
    #[error("model needs at least one channel")]
    NoChannels,
    #[error("row {channel} has {got} entries, expected {expected}")]
    RaggedRow { channel: usize, got: usize, expected: usize },
    #[error("theta[{channel},{rate}] = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { channel: usize, rate: usize, value: f64 },
    #[error("occupancy has {got} entries for {expected} channels")]
    OccupancyLength { got: usize, expected: usize },
    #[error("occupancy of channel {channel} = {value} is outside [0, 1]")]
    OccupancyOutOfRange { channel: usize, value: f64 },
}

/// Ordered transmission rates `r_1 < r_2 < ... < r_K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RateSet(Vec<f64>);

impl RateSet {
    pub fn new(rates: Vec<f64>) -> Result<Self, ModelError> {
        if rates.is_empty() {
            return Err(ModelError::EmptyRates);
        }
        for (i, &r) in rates.iter().enumerate() {
            if !(r.is_finite() && r > 0.0) {
                return Err(ModelError::InvalidRate { index: i + 1, value: r });
            }
            if i > 0 && r <= rates[i - 1] {
                return Err(ModelError::RatesNotIncreasing {
                    index: i + 1,
                    value: r,
                    previous: rates[i - 1],
                });
            }
        }
        Ok(Self(rates))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn rate(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn lowest(&self) -> f64 {
        self.0[0]
    }

    pub fn highest(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Duration of one packet sent at rate index `k`.
    pub fn packet_duration(&self, k: usize) -> f64 {
        1.0 / self.0[k]
    }
}

/// A (channel, rate) decision, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionPair {
    pub channel: usize,
    pub rate: usize,
}

impl DecisionPair {
    pub const fn new(channel: usize, rate: usize) -> Self {
        Self { channel, rate }
    }

    /// Row-major arm index for a problem with `rates` rates per channel.
    #[inline]
    pub const fn arm(self, rates: usize) -> usize {
        self.channel * rates + self.rate
    }

    #[inline]
    pub const fn from_arm(arm: usize, rates: usize) -> Self {
        Self { channel: arm / rates, rate: arm % rates }
    }

    /// 1-based `(channel, rate_index)` as used in reports.
    pub const fn one_based(self) -> (usize, usize) {
        (self.channel + 1, self.rate + 1)
    }
}

impl fmt::Display for DecisionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.channel + 1, self.rate + 1)
    }
}

impl Serialize for DecisionPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DecisionPair", 2)?;
        st.serialize_field("channel", &(self.channel + 1))?;
        st.serialize_field("rate_index", &(self.rate + 1))?;
        st.end()
    }
}

/// Dense channels x rates matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    channels: usize,
    rates: usize,
    values: Vec<f64>,
}

impl PairMatrix {
    pub fn filled(channels: usize, rates: usize, value: f64) -> Self {
        Self { channels, rates, values: vec![value; channels * rates] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        if rows.is_empty() {
            return Err(ModelError::NoChannels);
        }
        let rates = rows[0].len();
        if rates == 0 {
            return Err(ModelError::EmptyRates);
        }
        let mut values = Vec::with_capacity(rows.len() * rates);
        for (c, row) in rows.iter().enumerate() {
            if row.len() != rates {
                return Err(ModelError::RaggedRow { channel: c + 1, got: row.len(), expected: rates });
            }
            values.extend_from_slice(row);
        }
        Ok(Self { channels: rows.len(), rates, values })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn rates(&self) -> usize {
        self.rates
    }

    #[inline]
    pub fn get(&self, c: usize, k: usize) -> f64 {
        self.values[c * self.rates + k]
    }

    #[inline]
    pub fn at(&self, pair: DecisionPair) -> f64 {
        self.get(pair.channel, pair.rate)
    }

    pub fn set(&mut self, c: usize, k: usize, value: f64) {
        self.values[c * self.rates + k] = value;
    }

    pub fn row(&self, c: usize) -> &[f64] {
        &self.values[c * self.rates..(c + 1) * self.rates]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|c| self.row(c).to_vec()).collect()
    }

    fn check_probabilities(&self) -> Result<(), ModelError> {
        for c in 0..self.channels {
            for k in 0..self.rates {
                let v = self.get(c, k);
                if !(0.0..=1.0).contains(&v) {
                    return Err(ModelError::ProbabilityOutOfRange { channel: c + 1, rate: k + 1, value: v });
                }
            }
        }
        Ok(())
    }
}

impl Serialize for PairMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// One snapshot of the radio environment.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkModel {
    rates: RateSet,
    theta: PairMatrix,
    occupancy: Option<Vec<f64>>,
}

impl LinkModel {
    pub fn new(rates: RateSet, theta: PairMatrix) -> Result<Self, ModelError> {
        if theta.rates() != rates.len() {
            return Err(ModelError::RaggedRow { channel: 1, got: theta.rates(), expected: rates.len() });
        }
        theta.check_probabilities()?;
        Ok(Self { rates, theta, occupancy: None })
    }

    pub fn from_rows(rates: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        Self::new(RateSet::new(rates)?, PairMatrix::from_rows(rows)?)
    }

    /// Attach per-channel primary-user occupancy probabilities.
    pub fn with_occupancy(mut self, occupancy: Vec<f64>) -> Result<Self, ModelError> {
        if occupancy.len() != self.channels() {
            return Err(ModelError::OccupancyLength { got: occupancy.len(), expected: self.channels() });
        }
        for (c, &z) in occupancy.iter().enumerate() {
            if !(0.0..=1.0).contains(&z) {
                return Err(ModelError::OccupancyOutOfRange { channel: c + 1, value: z });
            }
        }
        self.occupancy = Some(occupancy);
        Ok(self)
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn theta(&self) -> &PairMatrix {
        &self.theta
    }

    pub fn occupancy(&self) -> Option<&[f64]> {
        self.occupancy.as_deref()
    }

    pub fn channels(&self) -> usize {
        self.theta.channels()
    }

    pub fn rate_count(&self) -> usize {
        self.rates.len()
    }

    pub fn arms(&self) -> usize {
        self.channels() * self.rate_count()
    }

    /// Success probability seen by the transmitter: `(1 - zeta_c) * theta_ck`.
    #[inline]
    pub fn effective_theta(&self, c: usize, k: usize) -> f64 {
        match &self.occupancy {
            Some(z) => (1.0 - z[c]) * self.theta.get(c, k),
            None => self.theta.get(c, k),
        }
    }

    /// The same model with occupancy folded into theta.
    pub fn effective(&self) -> LinkModel {
        if self.occupancy.is_none() {
            return self.clone();
        }
        let mut theta = self.theta.clone();
        for c in 0..self.channels() {
            for k in 0..self.rate_count() {
                theta.set(c, k, self.effective_theta(c, k));
            }
        }
        LinkModel { rates: self.rates.clone(), theta, occupancy: None }
    }

    pub fn throughput_matrix(&self) -> PairMatrix {
        let mut mu = PairMatrix::filled(self.channels(), self.rate_count(), 0.0);
        for c in 0..self.channels() {
            for k in 0..self.rate_count() {
                mu.set(c, k, self.rates.rate(k) * self.effective_theta(c, k));
            }
        }
        mu
    }

    pub fn optima(&self) -> OptimaSummary {
        compute_optima(self)
    }
}

pub fn throughput_matrix(model: &LinkModel) -> PairMatrix {
    model.throughput_matrix()
}

/// Best rate on one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelOptimum {
    #[serde(serialize_with = "one_based")]
    pub rate: usize,
    pub throughput: f64,
    pub unique: bool,
    /// First rate index `k_0c` of `N_c = {k : mu_c* <= r_k}`; equals `K` when empty.
    #[serde(serialize_with = "one_based")]
    pub first_candidate_rate: usize,
    /// `M_c = N_c ∩ {k_c* - 1, k_c* + 1}`.
    #[serde(serialize_with = "one_based_list")]
    pub neighbour_candidates: Vec<usize>,
}

/// Optimal decisions and the index sets derived from them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimaSummary {
    pub mu: PairMatrix,
    pub mu_star: f64,
    pub best: DecisionPair,
    pub unique: bool,
    /// `k_0`: first rate index with `mu* <= r_k`; `K` encodes the empty set.
    #[serde(serialize_with = "one_based")]
    pub first_candidate_rate: usize,
    /// `M = N ∩ {k* - 1, k* + 1}`.
    #[serde(serialize_with = "one_based_list")]
    pub neighbour_candidates: Vec<usize>,
    pub per_channel: Vec<ChannelOptimum>,
}

impl OptimaSummary {
    /// Rate indices `k_0..K` that could beat `mu*` if fully successful.
    pub fn candidate_rates(&self) -> std::ops::Range<usize> {
        self.first_candidate_rate..self.mu.rates()
    }

    pub fn is_candidate_rate(&self, k: usize) -> bool {
        k >= self.first_candidate_rate
    }

    pub fn per_channel_unique(&self) -> Vec<bool> {
        self.per_channel.iter().map(|c| c.unique).collect()
    }
}

fn one_based<S: serde::Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

fn one_based_list<S: serde::Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&(x + 1))?;
    }
    seq.end()
}

fn first_rate_at_least(rates: &RateSet, level: f64) -> usize {
    rates.as_slice().iter().position(|&r| level <= r).unwrap_or(rates.len())
}

fn neighbours_in(k: usize, first: usize, rate_count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2);
    if k > first {
        out.push(k - 1);
    }
    if k + 1 < rate_count && k + 1 >= first {
        out.push(k + 1);
    }
    out
}

/// Optima of `model` with lexicographic tie-breaking. Ties are recorded in
/// the uniqueness flags using exact floating-point comparison.
pub fn compute_optima(model: &LinkModel) -> OptimaSummary {
    let mu = model.throughput_matrix();
    let (channels, rate_count) = (mu.channels(), mu.rates());

    let mut best = DecisionPair::new(0, 0);
    let mut mu_star = mu.get(0, 0);
    let mut ties = 1usize;
    for c in 0..channels {
        for k in 0..rate_count {
            if c == 0 && k == 0 {
                continue;
            }
            let v = mu.get(c, k);
            if v > mu_star {
                mu_star = v;
                best = DecisionPair::new(c, k);
                ties = 1;
            } else if v == mu_star {
                ties += 1;
            }
        }
    }

    let per_channel = (0..channels)
        .map(|c| {
            let row = mu.row(c);
            let mut kb = 0;
            for k in 1..rate_count {
                if row[k] > row[kb] {
                    kb = k;
                }
            }
            let unique = row.iter().filter(|&&v| v == row[kb]).count() == 1;
            let first = first_rate_at_least(model.rates(), row[kb]);
            ChannelOptimum {
                rate: kb,
                throughput: row[kb],
                unique,
                first_candidate_rate: first,
                neighbour_candidates: neighbours_in(kb, first, rate_count),
            }
        })
        .collect();

    let first = first_rate_at_least(model.rates(), mu_star);
    OptimaSummary {
        neighbour_candidates: neighbours_in(best.rate, first, rate_count),
        mu,
        mu_star,
        best,
        unique: ties == 1,
        first_candidate_rate: first,
        per_channel,
    }
}

/// The stationary table used throughout the simulation study: 5 channels,
/// 8 rates (Mbit/s).
pub fn reference_model() -> LinkModel {
    LinkModel::from_rows(
        vec![6.0, 13.0, 19.5, 26.0, 39.0, 52.0, 58.5, 65.0],
        vec![
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.2, 0.0, 0.0],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.7, 0.1],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.6, 0.0, 0.0],
            vec![0.0; 8],
            vec![1.0, 1.0, 0.8, 0.2, 0.0, 0.0, 0.0, 0.0],
        ],
    )
    .expect("reference table is valid")
}
