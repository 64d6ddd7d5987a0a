//! Experiment orchestration: configuration, the select/draw/update loop,
//! regret accounting in both time systems, baselines and aggregation.

pub mod accounting;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{accelerate, EnvError, Environment, SyntheticDriftSpec, TraceTable};
use crate::io;
use crate::model::{DecisionPair, LinkModel, RateSet};
use crate::policy::{make_policy, IndexKind, IndexPolicy, Policy, PolicyError};
use accounting::{slot_bracket, CheckpointPlan, TimeAccountant, TimePoint};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, HarnessError> {
    Err(HarnessError::Config(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    KlUcb,
    CrsT,
    KlUcbU,
    /// Plays the best pair of the current step.
    Oracle,
    /// Plays the best fixed pair in hindsight.
    Static,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub label: Option<String>,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind) -> Self {
        Self { kind, window: None, strict: false, label: None }
    }

    pub fn windowed(kind: PolicyKind, window: usize) -> Self {
        Self { window: Some(window), ..Self::new(kind) }
    }

    fn index_kind(&self) -> Option<IndexKind> {
        match self.kind {
            PolicyKind::KlUcb => Some(IndexKind::KlUcb),
            PolicyKind::CrsT => Some(IndexKind::CrsT),
            PolicyKind::KlUcbU => Some(IndexKind::KlUcbU),
            PolicyKind::Oracle | PolicyKind::Static => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Accounting {
    /// Slot system only.
    #[default]
    Alternative,
    /// Time system only.
    Original,
    Both,
}

impl Accounting {
    pub fn slots(self) -> bool {
        self != Accounting::Original
    }

    pub fn time(self) -> bool {
        self != Accounting::Alternative
    }
}

fn default_true() -> bool {
    true
}

/// JSON experiment description. Exactly one of `theta`, `theta_csv`,
/// `trace_csv`, `synth` gives the link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub rates: Option<Vec<f64>>,
    #[serde(default)]
    pub theta: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub theta_csv: Option<PathBuf>,
    #[serde(default)]
    pub trace_csv: Option<PathBuf>,
    #[serde(default)]
    pub synth: Option<SyntheticDriftSpec>,
    #[serde(default)]
    pub occupancy: Option<Vec<f64>>,
    pub policies: Vec<PolicyConfig>,
    pub horizon: u64,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub accounting: Accounting,
    /// Time compression applied to trace and synthetic sources.
    #[serde(default)]
    pub acceleration: Option<u64>,
    /// Write per-step decisions of the first seed.
    #[serde(default = "default_true")]
    pub decisions: bool,
}

impl ExperimentConfig {
    /// Parse a config file; relative paths inside resolve against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.theta_csv, &mut cfg.trace_csv].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<Experiment, HarnessError> {
        let sources = [self.theta.is_some(), self.theta_csv.is_some(), self.trace_csv.is_some(), self.synth.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return invalid("exactly one of theta, theta_csv, trace_csv, synth is required");
        }
        if self.seeds.is_empty() {
            return invalid("at least one seed is required");
        }
        if self.policies.is_empty() {
            return invalid("at least one policy is required");
        }
        if self.acceleration == Some(0) {
            return invalid("acceleration must be at least 1");
        }
        let rates = || -> Result<RateSet, HarnessError> {
            match &self.rates {
                Some(r) => RateSet::new(r.clone()).map_err(|e| HarnessError::Config(e.to_string())),
                None => invalid("rates are required for this link source"),
            }
        };
        let with_occupancy = |m: LinkModel| -> Result<LinkModel, HarnessError> {
            match &self.occupancy {
                Some(z) => m.with_occupancy(z.clone()).map_err(|e| HarnessError::Config(e.to_string())),
                None => Ok(m),
            }
        };
        let source = if let Some(rows) = &self.theta {
            let m = LinkModel::from_rows(rates()?.as_slice().to_vec(), rows.clone())
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            Source::Stationary(with_occupancy(m)?)
        } else if let Some(p) = &self.theta_csv {
            Source::Stationary(with_occupancy(io::read_theta_csv(p, &rates()?)?)?)
        } else {
            if self.occupancy.is_some() {
                return invalid("occupancy only applies to stationary sources");
            }
            let trace = if let Some(p) = &self.trace_csv {
                let file = fs::File::open(p).map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))?;
                let h = self.horizon.max(1);
                TraceTable::read_csv(file, rates()?, h)?
            } else {
                let spec = self.synth.as_ref().expect("one source is set");
                if self.rates.as_ref().is_some_and(|r| *r != spec.rates) {
                    return invalid("rates disagree with synth.rates");
                }
                spec.generate()?
            };
            let trace = match self.acceleration {
                Some(a) => accelerate(&trace, a),
                None => trace,
            };
            Source::Trace(trace.with_horizon(self.horizon.max(1))?)
        };
        Experiment::new(source, self.policies.clone(), self.horizon, self.seeds.clone(), self.accounting)
            .map(|e| e.with_decisions(self.decisions))
    }
}

/// Where success probabilities come from.
#[derive(Debug, Clone)]
pub enum Source {
    Stationary(LinkModel),
    Trace(TraceTable),
}

impl Source {
    pub fn environment(&self, seed: u64) -> Environment {
        match self {
            Source::Stationary(m) => Environment::stationary(m, seed),
            Source::Trace(t) => Environment::from_trace(t, seed),
        }
    }

    fn arms(&self) -> usize {
        match self {
            Source::Stationary(m) => m.arms(),
            Source::Trace(t) => t.channels() * t.rates().len(),
        }
    }
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub source: Source,
    pub policies: Vec<PolicyConfig>,
    pub horizon: u64,
    pub seeds: Vec<u64>,
    pub accounting: Accounting,
    pub decisions: bool,
}

impl Experiment {
    pub fn new(
        source: Source,
        policies: Vec<PolicyConfig>,
        horizon: u64,
        seeds: Vec<u64>,
        accounting: Accounting,
    ) -> Result<Self, HarnessError> {
        if seeds.is_empty() {
            return invalid("at least one seed is required");
        }
        if policies.is_empty() {
            return invalid("at least one policy is required");
        }
        if (horizon as usize) < source.arms() {
            return invalid(format!("horizon {horizon} is shorter than the {} initial transmissions", source.arms()));
        }
        if accounting.time() && !matches!(source, Source::Stationary(_)) {
            return invalid("time-system accounting needs a stationary link");
        }
        for p in &policies {
            if p.window == Some(0) {
                return invalid("window must be at least 1");
            }
            if p.index_kind().is_none() && (p.window.is_some() || p.strict) {
                return invalid("window and strict only apply to index policies");
            }
        }
        let mut names: Vec<String> = policies.iter().map(policy_name).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return invalid("policy names must be distinct; set a label");
        }
        Ok(Self { source, policies, horizon, seeds, accounting, decisions: false })
    }

    pub fn with_decisions(mut self, on: bool) -> Self {
        self.decisions = on;
        self
    }

    pub fn plan(&self) -> CheckpointPlan {
        let rates = self.rates();
        CheckpointPlan::new(self.horizon, rates.as_slice(), self.accounting.time())
    }

    pub fn rates(&self) -> RateSet {
        match &self.source {
            Source::Stationary(m) => m.rates().clone(),
            Source::Trace(t) => t.rates().clone(),
        }
    }
}

pub fn policy_name(p: &PolicyConfig) -> String {
    if let Some(l) = &p.label {
        return l.clone();
    }
    match p.index_kind() {
        Some(k) => {
            let base = crate::policy::display_name(k, p.window);
            if p.strict && k == IndexKind::KlUcbU {
                format!("{base}[strict]")
            } else {
                base
            }
        }
        None if p.kind == PolicyKind::Oracle => "Oracle".to_string(),
        None => "Static".to_string(),
    }
}

enum Runner {
    Index(Box<IndexPolicy>),
    Oracle,
    Static(DecisionPair),
}

impl Runner {
    fn select(&mut self, env: &Environment, n: u64) -> Result<DecisionPair, HarnessError> {
        Ok(match self {
            Runner::Index(p) => p.select(),
            Runner::Oracle => env.best_pair_at(n)?,
            Runner::Static(d) => *d,
        })
    }

    fn update(&mut self, d: DecisionPair, x: bool) -> Result<(), HarnessError> {
        if let Runner::Index(p) = self {
            p.update(d, x)?;
        }
        Ok(())
    }
}

/// Outcome of one (policy, seed) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    /// Slot regret at each of `plan.probe_slots`.
    pub slot_regret: Vec<f64>,
    pub time_points: Vec<TimePoint>,
    /// `sum mu_{d_n}(n)`.
    pub expected_reward: f64,
    /// `sum r_{k_n} X_n`.
    pub realized_reward: f64,
    /// Pull counts per arm after the horizon.
    pub pulls: Vec<u64>,
    pub decisions: Vec<DecisionPair>,
}

impl RunRecord {
    pub fn final_regret(&self) -> f64 {
        *self.slot_regret.last().expect("at least one checkpoint")
    }
}

/// Run one policy on one outcome tape.
pub fn run_single(
    policy: &PolicyConfig,
    env: &Environment,
    plan: &CheckpointPlan,
    record_decisions: bool,
) -> Result<RunRecord, HarnessError> {
    let rates = env.rates().clone();
    let k_count = rates.len();
    let horizon = plan.horizon;
    let mut runner = match policy.index_kind() {
        Some(kind) => Runner::Index(Box::new(make_policy(kind, &rates, env.channels(), policy.window, policy.strict)?)),
        None if policy.kind == PolicyKind::Oracle => Runner::Oracle,
        None => Runner::Static(env.static_best(horizon).0),
    };
    let mut time = if plan.times.is_empty() {
        None
    } else {
        let opt = env.optimum_at(0)?;
        let theta_star = env.theta_at(0)?.at(opt.best);
        Some(TimeAccountant::new(rates.as_slice(), &plan.times, theta_star, rates.rate(opt.best.rate)))
    };
    let mut probes = plan.probe_slots.iter().peekable();
    let mut slot_regret = Vec::with_capacity(plan.probe_slots.len());
    while probes.next_if_eq(&&0).is_some() {
        slot_regret.push(0.0);
    }
    let mut regret = 0.0;
    let mut expected_reward = 0.0;
    let mut realized_reward = 0.0;
    let mut pulls = vec![0u64; env.channels() * k_count];
    let mut decisions = Vec::with_capacity(if record_decisions { horizon as usize } else { 0 });
    for n in 0..horizon {
        let d = runner.select(env, n)?;
        let x = env.draw(d, n)?;
        runner.update(d, x)?;
        let opt = env.optimum_at(n)?;
        let mu = opt.mu.at(d);
        regret += opt.mu_star - mu;
        expected_reward += mu;
        if x {
            realized_reward += rates.rate(d.rate);
        }
        pulls[d.arm(k_count)] += 1;
        if let Some(acc) = time.as_mut() {
            acc.push(d.rate, env.theta_at(n)?.at(d));
        }
        if record_decisions {
            decisions.push(d);
        }
        while probes.next_if_eq(&&(n + 1)).is_some() {
            slot_regret.push(regret);
        }
    }
    let time_points = match time {
        Some(mut acc) => {
            acc.finish();
            acc.points
        }
        None => Vec::new(),
    };
    Ok(RunRecord { seed: env.seed(), slot_regret, time_points, expected_reward, realized_reward, pulls, decisions })
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub stddev: f64,
    /// Standard error of the mean.
    pub stderr: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let stddev = if xs.len() > 1 { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    Moments { mean, stddev, stderr: stddev / n.sqrt() }
}

/// All runs of one policy, in seed order.
#[derive(Debug, Clone)]
pub struct PolicyRuns {
    pub name: String,
    pub config: PolicyConfig,
    pub runs: Vec<RunRecord>,
}

impl PolicyRuns {
    /// Slot regret at `slot` for every seed.
    pub fn regret_at(&self, plan: &CheckpointPlan, slot: u64) -> Vec<f64> {
        let i = plan.probe_slots.binary_search(&slot).expect("slot is a probe");
        self.runs.iter().map(|r| r.slot_regret[i]).collect()
    }

    pub fn final_regret(&self) -> Moments {
        moments(&self.runs.iter().map(RunRecord::final_regret).collect::<Vec<_>>())
    }

    pub fn expected_reward(&self) -> Moments {
        moments(&self.runs.iter().map(|r| r.expected_reward).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub plan: CheckpointPlan,
    pub policies: Vec<PolicyRuns>,
    pub seeds: Vec<u64>,
    pub accounting: Accounting,
    /// `sum_n mu*(n)` over the horizon (identical for every seed).
    pub oracle_reward: f64,
    pub static_pair: DecisionPair,
    pub static_reward: f64,
    /// Best pair per step, kept when decisions are recorded.
    pub best_pairs: Vec<DecisionPair>,
    pub bounds: Option<crate::bounds::BoundReport>,
}

/// Every (policy, seed) pair runs independently in parallel; results are
/// collected in config order so scheduling cannot change the output.
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentResult, HarnessError> {
    let plan = exp.plan();
    let base = exp.source.environment(0);
    let jobs: Vec<(usize, usize)> =
        (0..exp.policies.len()).flat_map(|p| (0..exp.seeds.len()).map(move |s| (p, s))).collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(p, s)| {
            let env = base.with_seed(exp.seeds[s]);
            run_single(&exp.policies[p], &env, &plan, exp.decisions && s == 0)
        })
        .collect::<Result<_, _>>()?;
    let mut records = records.into_iter();
    let policies = exp
        .policies
        .iter()
        .map(|cfg| PolicyRuns {
            name: policy_name(cfg),
            config: cfg.clone(),
            runs: records.by_ref().take(exp.seeds.len()).collect(),
        })
        .collect();
    let (static_pair, static_reward) = base.static_best(exp.horizon);
    let best_pairs = if exp.decisions {
        (0..exp.horizon).map(|n| base.best_pair_at(n)).collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    let bounds = match &exp.source {
        Source::Stationary(m) => Some(crate::bounds::bound_report(m)),
        Source::Trace(_) => None,
    };
    Ok(ExperimentResult {
        oracle_reward: base.oracle_reward(exp.horizon),
        plan,
        policies,
        seeds: exp.seeds.clone(),
        accounting: exp.accounting,
        static_pair,
        static_reward,
        best_pairs,
        bounds,
    })
}

/// Both regrets compared at one time `T`: slot regret at the fewest and the
/// most packets that fit in `T`, around the packet-time regret.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub time: f64,
    pub lower_slot: u64,
    pub upper_slot: u64,
    pub lower: Moments,
    pub middle: Moments,
    pub upper: Moments,
    /// `mean R(floor(T r_1)) <= mean R_1(T) + 3 se` and
    /// `mean R_1(T) <= mean R(ceil(T r_K)) + 3 se`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccountingReport {
    pub policy: String,
    pub checks: Vec<SandwichCheck>,
    /// `sum s_ck / r_k <= T` for every run and time checkpoint.
    pub clock_within_budget: bool,
}

fn combined_se(a: &Moments, b: &Moments) -> f64 {
    (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
}

pub fn accounting_check(result: &ExperimentResult, rates: &RateSet) -> Vec<AccountingReport> {
    let plan = &result.plan;
    result
        .policies
        .iter()
        .map(|pr| {
            let checks = plan
                .times
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let (lo, hi) = slot_bracket(t, rates.as_slice(), plan.horizon);
                    let lower = moments(&pr.regret_at(plan, lo));
                    let upper = moments(&pr.regret_at(plan, hi));
                    let middle = moments(&pr.runs.iter().map(|r| r.time_points[i].regret).collect::<Vec<_>>());
                    let holds = lower.mean <= middle.mean + 3.0 * combined_se(&lower, &middle)
                        && middle.mean <= upper.mean + 3.0 * combined_se(&middle, &upper);
                    SandwichCheck { time: t, lower_slot: lo, upper_slot: hi, lower, middle, upper, holds }
                })
                .collect();
            let clock_within_budget = pr.runs.iter().all(|r| r.time_points.iter().all(|p| p.clock <= p.time));
            AccountingReport { policy: pr.name.clone(), checks, clock_within_budget }
        })
        .collect()
}
