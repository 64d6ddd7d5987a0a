//! File formats shared by the CLI and the experiment harness: rate lists
//! (JSON), success-probability tables (CSV) and the structure report.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::graph::{check_graphically_unimodal, check_monotone, check_unimodal, NeighborhoodGraph, UnimodalFlags};
use crate::model::{DecisionPair, LinkModel, RateSet};

#[derive(Deserialize)]
#[serde(untagged)]
enum RatesFile {
    Plain(Vec<f64>),
    Keyed { rates: Vec<f64> },
}

/// Rates as a JSON array or an object with a `rates` array.
pub fn parse_rates_json(text: &str) -> Result<RateSet> {
    let rates = match serde_json::from_str::<RatesFile>(text).context("rates must be a JSON array or {\"rates\": [...]}")? {
        RatesFile::Plain(r) | RatesFile::Keyed { rates: r } => r,
    };
    Ok(RateSet::new(rates)?)
}

pub fn read_rates_json(path: &Path) -> Result<RateSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_rates_json(&text).with_context(|| format!("in {}", path.display()))
}

/// Success probabilities with header `channel,<one column per rate>` and
/// one row per channel, in channel order.
pub fn parse_theta_csv(reader: impl Read, rates: &RateSet) -> Result<LinkModel> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.len() != rates.len() + 1 {
        bail!("theta table has {} rate columns, expected {}", header.len().saturating_sub(1), rates.len());
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let channel: usize = rec[0].trim().parse().with_context(|| format!("row {}: bad channel index", i + 1))?;
        if channel != i + 1 {
            bail!("row {} is labelled channel {channel}; channels must be listed as 1, 2, ...", i + 1);
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("channel {channel}: bad value {v:?}")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(values);
    }
    Ok(LinkModel::from_rows(rates.as_slice().to_vec(), rows)?)
}

pub fn read_theta_csv(path: &Path, rates: &RateSet) -> Result<LinkModel> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_theta_csv(file, rates).with_context(|| format!("in {}", path.display()))
}

pub fn theta_csv_string(model: &LinkModel) -> String {
    let mut out = String::from("channel");
    for r in model.rates().as_slice() {
        out.push_str(&format!(",{r}"));
    }
    out.push('\n');
    for c in 0..model.channels() {
        out.push_str(&(c + 1).to_string());
        for v in model.theta().row(c) {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphicalReport {
    pub holds: Option<bool>,
    pub witness: Option<DecisionPair>,
    pub reason: Option<String>,
}

/// Output of the `check` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub channels: usize,
    pub rates: usize,
    pub gamma: usize,
    pub best: DecisionPair,
    pub mu_star: f64,
    pub unique_optimum: bool,
    pub monotone: Vec<bool>,
    pub unimodal: Vec<UnimodalFlags>,
    pub graphically_unimodal: GraphicalReport,
}

pub fn structure_report(model: &LinkModel) -> StructureReport {
    let graph = NeighborhoodGraph::for_model(model);
    let opt = model.optima();
    let graphically_unimodal = match check_graphically_unimodal(model, &graph) {
        Ok(g) => GraphicalReport { holds: Some(g.holds), witness: g.witness, reason: None },
        Err(e) => GraphicalReport { holds: None, witness: None, reason: Some(e.to_string()) },
    };
    StructureReport {
        channels: model.channels(),
        rates: model.rate_count(),
        gamma: graph.gamma(),
        best: opt.best,
        mu_star: opt.mu_star,
        unique_optimum: opt.unique,
        monotone: check_monotone(model),
        unimodal: check_unimodal(model),
        graphically_unimodal,
    }
}
