//! Regret bookkeeping in the two time systems.
//!
//! In the slot system every packet takes one slot and regret after `n`
//! slots is `sum mu*(i) - mu(d_i)`. In the time system a packet at rate
//! `r_k` lasts `1/r_k`; by time `T` the transmitter has finished `s_ck(T)`
//! packets on each pair and the regret is
//! `theta* floor(r* T) - sum theta_ck s_ck(T)`.

use serde::Serialize;

/// Elapsed time of a set of transmissions, evaluated as
/// `sum_k packets_k / r_k` so the same counts always give the same value.
#[derive(Debug, Clone)]
pub struct PacketClock {
    rates: Vec<f64>,
    per_rate: Vec<u64>,
}

impl PacketClock {
    pub fn new(rates: &[f64]) -> Self {
        Self { rates: rates.to_vec(), per_rate: vec![0; rates.len()] }
    }

    pub fn elapsed(&self) -> f64 {
        self.rates.iter().zip(&self.per_rate).map(|(r, &s)| s as f64 / r).sum()
    }

    /// Elapsed time if one more packet at rate index `k` were sent.
    pub fn elapsed_with(&mut self, k: usize) -> f64 {
        self.per_rate[k] += 1;
        let t = self.elapsed();
        self.per_rate[k] -= 1;
        t
    }

    pub fn push(&mut self, k: usize) {
        self.per_rate[k] += 1;
    }

    pub fn packets(&self) -> u64 {
        self.per_rate.iter().sum()
    }
}

/// Where regret is sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointPlan {
    pub horizon: u64,
    /// Slot checkpoints `{2^j <= H} ∪ {H}`.
    pub slots: Vec<u64>,
    /// Time checkpoints `{2^j < H / r_K} ∪ {H / r_K}`; empty when the time
    /// system is not tracked.
    pub times: Vec<f64>,
    /// Every slot count at which slot regret must be known: the slot
    /// checkpoints plus `floor(T r_1)` and `ceil(T r_K)` for each time `T`.
    pub probe_slots: Vec<u64>,
}

pub fn geometric_slots(horizon: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(1u64), |&x| x.checked_mul(2)).take_while(|&x| x <= horizon).collect();
    if v.last() != Some(&horizon) {
        v.push(horizon);
    }
    v
}

/// Slot bracket `(floor(T r_1), ceil(T r_K))` of time `T`, clamped to `horizon`.
pub fn slot_bracket(time: f64, rates: &[f64], horizon: u64) -> (u64, u64) {
    let lo = (time * rates[0]).floor() as u64;
    let hi = (time * rates[rates.len() - 1]).ceil() as u64;
    (lo.min(horizon), hi.min(horizon))
}

impl CheckpointPlan {
    pub fn new(horizon: u64, rates: &[f64], track_time: bool) -> Self {
        let slots = geometric_slots(horizon);
        let mut times = Vec::new();
        let mut probe_slots = slots.clone();
        if track_time {
            let end = horizon as f64 / rates[rates.len() - 1];
            times = std::iter::successors(Some(1.0f64), |&x| Some(x * 2.0)).take_while(|&x| x < end).collect();
            times.push(end);
            for &t in &times {
                let (lo, hi) = slot_bracket(t, rates, horizon);
                probe_slots.push(lo);
                probe_slots.push(hi);
            }
        }
        probe_slots.sort_unstable();
        probe_slots.dedup();
        Self { horizon, slots, times, probe_slots }
    }
}

/// Time-system state at one time checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimePoint {
    pub time: f64,
    /// Packets finished by `time`.
    pub packets: u64,
    /// `sum s_ck / r_k` for those packets; never exceeds `time`.
    pub clock: f64,
    pub regret: f64,
}

/// Streams packets into the time system and records [`TimePoint`]s.
#[derive(Debug, Clone)]
pub struct TimeAccountant {
    clock: PacketClock,
    times: Vec<f64>,
    next: usize,
    theta_star: f64,
    rate_star: f64,
    /// `sum theta` over finished packets.
    collected: f64,
    pub points: Vec<TimePoint>,
}

impl TimeAccountant {
    pub fn new(rates: &[f64], times: &[f64], theta_star: f64, rate_star: f64) -> Self {
        Self {
            clock: PacketClock::new(rates),
            times: times.to_vec(),
            next: 0,
            theta_star,
            rate_star,
            collected: 0.0,
            points: Vec::with_capacity(times.len()),
        }
    }

    fn close(&mut self, time: f64) {
        let regret = self.theta_star * (self.rate_star * time).floor() - self.collected;
        self.points.push(TimePoint { time, packets: self.clock.packets(), clock: self.clock.elapsed(), regret });
    }

    /// Account one more packet at rate index `k` with success probability
    /// `theta`.
    pub fn push(&mut self, k: usize, theta: f64) {
        if self.done() {
            return;
        }
        let finish = self.clock.elapsed_with(k);
        while self.next < self.times.len() && finish > self.times[self.next] {
            let t = self.times[self.next];
            self.close(t);
            self.next += 1;
        }
        self.clock.push(k);
        self.collected += theta;
    }

    pub fn done(&self) -> bool {
        self.next >= self.times.len()
    }

    /// Close every remaining checkpoint (all packets fit).
    pub fn finish(&mut self) {
        while self.next < self.times.len() {
            let t = self.times[self.next];
            self.close(t);
            self.next += 1;
        }
    }
}
