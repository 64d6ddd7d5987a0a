//! Result files: `regret.csv`, `summary.json`, `decisions.csv` and, for
//! stationary links, `bounds.json`.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use super::{accounting_check, moments, AccountingReport, ExperimentResult, Moments};
use crate::model::{DecisionPair, RateSet};

/// `regret.csv`: one row per (accounting, checkpoint, policy) with the
/// seed mean, standard deviation and one column per seed.
pub fn regret_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("accounting,checkpoint,policy,mean,stddev");
    for s in &result.seeds {
        out.push_str(&format!(",seed_{s}"));
    }
    out.push('\n');
    let mut row = |label: &str, checkpoint: String, policy: &str, values: &[f64]| {
        let m = moments(values);
        out.push_str(&format!("{label},{checkpoint},{policy},{},{}", m.mean, m.stddev));
        for v in values {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    };
    let plan = &result.plan;
    if result.accounting.slots() {
        for &slot in &plan.slots {
            for pr in &result.policies {
                row("alternative", slot.to_string(), &pr.name, &pr.regret_at(plan, slot));
            }
        }
    }
    if result.accounting.time() {
        for (i, t) in plan.times.iter().enumerate() {
            for pr in &result.policies {
                let v: Vec<f64> = pr.runs.iter().map(|r| r.time_points[i].regret).collect();
                row("original", t.to_string(), &pr.name, &v);
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct EfficiencyRow {
    pub policy: String,
    /// Expected cumulative reward relative to the oracle, in percent.
    pub percent: f64,
    pub reward: Moments,
}

#[derive(Debug, Serialize)]
pub struct PolicySummary {
    pub policy: String,
    pub final_regret: Moments,
    pub expected_reward: Moments,
    pub realized_reward: Moments,
    pub efficiency: f64,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub horizon: u64,
    pub seeds: Vec<u64>,
    pub oracle_reward: f64,
    pub static_pair: DecisionPair,
    pub static_reward: f64,
    pub policies: Vec<PolicySummary>,
    /// Static, every configured policy, then Oracle.
    pub efficiency: Vec<EfficiencyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accounting: Option<Vec<AccountingReport>>,
}

pub fn summary(result: &ExperimentResult, rates: &RateSet) -> Summary {
    let oracle = result.oracle_reward;
    let ratio = |x: f64| if oracle > 0.0 { x / oracle } else { 1.0 };
    let point = |v: f64| Moments { mean: v, stddev: 0.0, stderr: 0.0 };
    let policies: Vec<PolicySummary> = result
        .policies
        .iter()
        .map(|pr| {
            let expected = pr.expected_reward();
            PolicySummary {
                policy: pr.name.clone(),
                final_regret: pr.final_regret(),
                realized_reward: moments(&pr.runs.iter().map(|r| r.realized_reward).collect::<Vec<_>>()),
                efficiency: ratio(expected.mean),
                expected_reward: expected,
            }
        })
        .collect();
    let mut efficiency = vec![EfficiencyRow {
        policy: "Static".into(),
        percent: 100.0 * ratio(result.static_reward),
        reward: point(result.static_reward),
    }];
    efficiency.extend(policies.iter().map(|p| EfficiencyRow {
        policy: p.policy.clone(),
        percent: 100.0 * p.efficiency,
        reward: p.expected_reward,
    }));
    efficiency.push(EfficiencyRow { policy: "Oracle".into(), percent: 100.0, reward: point(oracle) });
    Summary {
        horizon: result.plan.horizon,
        seeds: result.seeds.clone(),
        oracle_reward: oracle,
        static_pair: result.static_pair,
        static_reward: result.static_reward,
        policies,
        efficiency,
        accounting: (result.accounting == super::Accounting::Both).then(|| accounting_check(result, rates)),
    }
}

/// `decisions.csv` for the first seed.
pub fn decisions_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("step,policy,channel,rate_index,best_channel,best_rate_index\n");
    for pr in &result.policies {
        let Some(run) = pr.runs.first() else { continue };
        for (n, (d, b)) in run.decisions.iter().zip(&result.best_pairs).enumerate() {
            let (c, k) = d.one_based();
            let (bc, bk) = b.one_based();
            out.push_str(&format!("{},{},{c},{k},{bc},{bk}\n", n + 1, pr.name));
        }
    }
    out
}

fn write(dir: &Path, name: &str, body: &[u8]) -> Result<()> {
    let path = dir.join(name);
    let mut f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(body).with_context(|| format!("writing {}", path.display()))
}

pub fn emit_outputs(result: &ExperimentResult, rates: &RateSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write(dir, "regret.csv", regret_csv(result).as_bytes())?;
    let summary = serde_json::to_string_pretty(&summary(result, rates))?;
    write(dir, "summary.json", summary.as_bytes())?;
    if !result.best_pairs.is_empty() {
        write(dir, "decisions.csv", decisions_csv(result).as_bytes())?;
    }
    if let Some(b) = &result.bounds {
        write(dir, "bounds.json", serde_json::to_string_pretty(b)?.as_bytes())?;
    }
    Ok(())
}
