//! Neighbourhood graph over (channel, rate) pairs and the structure checks
//! (monotone success probabilities, unimodal throughput, graphical
//! unimodality) run against a [`LinkModel`].

use serde::Serialize;
use thiserror::Error;

use crate::model::{DecisionPair, LinkModel, PairMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph is {graph_channels}x{graph_rates} but the model is {model_channels}x{model_rates}")]
    DimensionMismatch { graph_channels: usize, graph_rates: usize, model_channels: usize, model_rates: usize },
    #[error("the optimal pair is not unique (tie at {0})")]
    NonUniqueOptimum(DecisionPair),
}

/// Directed graph whose vertices are all (channel, rate) pairs. From
/// `(c, k)` there are edges to `(c, k-1)`, `(c, k+1)`, `(c', k)` and
/// `(c', k+1)` for every other channel `c'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodGraph {
    channels: usize,
    rates: usize,
    adjacency: Vec<Vec<DecisionPair>>,
    max_degree: usize,
}

impl NeighborhoodGraph {
    /// Adjacency lists list rate neighbours first, then other channels in
    /// ascending order.
    pub fn build(channels: usize, rates: usize) -> Self {
        let mut adjacency = Vec::with_capacity(channels * rates);
        for c in 0..channels {
            for k in 0..rates {
                let mut n = Vec::with_capacity(2 * channels);
                if k > 0 {
                    n.push(DecisionPair::new(c, k - 1));
                }
                if k + 1 < rates {
                    n.push(DecisionPair::new(c, k + 1));
                }
                for other in (0..channels).filter(|&o| o != c) {
                    n.push(DecisionPair::new(other, k));
                    if k + 1 < rates {
                        n.push(DecisionPair::new(other, k + 1));
                    }
                }
                adjacency.push(n);
            }
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Self { channels, rates, adjacency, max_degree }
    }

    pub fn for_model(model: &LinkModel) -> Self {
        Self::build(model.channels(), model.rate_count())
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn rates(&self) -> usize {
        self.rates
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, d: DecisionPair) -> &[DecisionPair] {
        &self.adjacency[d.arm(self.rates)]
    }

    /// Maximum out-degree (`gamma`).
    pub fn gamma(&self) -> usize {
        self.max_degree
    }

    fn check_dims(&self, mu: &PairMatrix) -> Result<(), GraphError> {
        if mu.channels() != self.channels || mu.rates() != self.rates {
            return Err(GraphError::DimensionMismatch {
                graph_channels: self.channels,
                graph_rates: self.rates,
                model_channels: mu.channels(),
                model_rates: mu.rates(),
            });
        }
        Ok(())
    }
}

pub fn build_graph(channels: usize, rates: usize) -> NeighborhoodGraph {
    NeighborhoodGraph::build(channels, rates)
}

/// Per channel: are success probabilities nonincreasing in the rate?
pub fn check_monotone(model: &LinkModel) -> Vec<bool> {
    (0..model.channels())
        .map(|c| (1..model.rate_count()).all(|k| model.effective_theta(c, k - 1) >= model.effective_theta(c, k)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnimodalFlags {
    /// Strict rise to a single peak, then strict fall.
    pub strict: bool,
    /// Same, but a tail of exactly-zero throughputs is allowed to tie.
    pub relaxed: bool,
}

fn strictly_unimodal(row: &[f64]) -> bool {
    let mut i = 1;
    while i < row.len() && row[i] > row[i - 1] {
        i += 1;
    }
    while i < row.len() && row[i] < row[i - 1] {
        i += 1;
    }
    i >= row.len()
}

pub fn unimodal_flags(row: &[f64]) -> UnimodalFlags {
    let kept = row.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
    UnimodalFlags { strict: strictly_unimodal(row), relaxed: strictly_unimodal(&row[..kept]) }
}

/// Per channel unimodality of the throughput `r_k * theta_ck` in `k`.
pub fn check_unimodal(model: &LinkModel) -> Vec<UnimodalFlags> {
    let mu = model.throughput_matrix();
    (0..model.channels()).map(|c| unimodal_flags(mu.row(c))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphicalUnimodality {
    pub holds: bool,
    /// A non-optimal vertex without a strictly better neighbour.
    pub witness: Option<DecisionPair>,
}

/// Every non-optimal vertex has a strictly better neighbour, which on a
/// finite graph is the same as a strictly increasing path to the optimum.
pub fn check_graphically_unimodal(
    model: &LinkModel,
    graph: &NeighborhoodGraph,
) -> Result<GraphicalUnimodality, GraphError> {
    let opt = model.optima();
    graph.check_dims(&opt.mu)?;
    if !opt.unique {
        return Err(GraphError::NonUniqueOptimum(opt.best));
    }
    graphically_unimodal_mu(&opt.mu, opt.best, graph)
}

/// Same check on a raw throughput matrix with a known optimum.
pub fn graphically_unimodal_mu(
    mu: &PairMatrix,
    best: DecisionPair,
    graph: &NeighborhoodGraph,
) -> Result<GraphicalUnimodality, GraphError> {
    graph.check_dims(mu)?;
    for c in 0..mu.channels() {
        for k in 0..mu.rates() {
            let d = DecisionPair::new(c, k);
            if d == best {
                continue;
            }
            let here = mu.at(d);
            if !graph.neighbors(d).iter().any(|&n| mu.at(n) > here) {
                return Ok(GraphicalUnimodality { holds: false, witness: Some(d) });
            }
        }
    }
    Ok(GraphicalUnimodality { holds: true, witness: None })
}
