//! Asymptotic regret constants as functions of a link model: the
//! unstructured constant `c_I`, the unimodal upper estimate `c_U'`, the
//! graphically unimodal constant `c_GU`, and the finite-time constants
//! behind CRS-T.
//!
//! All computations use occupancy-adjusted success probabilities.
//! Divergences that are infinite make the corresponding term vanish.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{graphically_unimodal_mu, NeighborhoodGraph};
use crate::kl::divergence;
use crate::model::{DecisionPair, LinkModel, OptimaSummary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("non-unique optimum")]
    NonUniqueOptimum,
    #[error("degenerate channel {}", .0 + 1)]
    DegenerateChannel(usize),
    #[error("not graphically unimodal (local maximum at {0})")]
    NotGraphicallyUnimodal(DecisionPair),
    #[error("zero divergence at {0}")]
    ZeroDivergence(DecisionPair),
    #[error("no rate neighbours")]
    NoRateNeighbours,
    #[error("tau_c = 0 on channel {}", .0 + 1)]
    ZeroTau(usize),
}

/// One summand `gap / divergence`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm {
    pub pair: DecisionPair,
    pub gap: f64,
    /// `None` stands for an infinite divergence.
    pub divergence: Option<f64>,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub terms: Vec<BoundTerm>,
}

impl Bound {
    /// Sums in pair order, so a bound over a subset of another bound's
    /// (nonnegative) terms can never round above it.
    fn from_terms(mut terms: Vec<BoundTerm>) -> Self {
        terms.sort_by_key(|t| t.pair);
        Self { value: terms.iter().map(|t| t.contribution).sum(), terms }
    }
}

/// `I(p, target)` with targets above 1 treated as unreachable.
fn divergence_to(p: f64, target: f64) -> f64 {
    if target > 1.0 {
        f64::INFINITY
    } else {
        divergence(p, target.max(0.0))
    }
}

fn term(pair: DecisionPair, gap: f64, div: f64) -> Result<BoundTerm, BoundError> {
    if div == 0.0 {
        return Err(BoundError::ZeroDivergence(pair));
    }
    Ok(BoundTerm {
        pair,
        gap,
        divergence: div.is_finite().then_some(div),
        contribution: if div.is_finite() { gap / div } else { 0.0 },
    })
}

struct Prepared {
    model: LinkModel,
    opt: OptimaSummary,
}

impl Prepared {
    fn new(model: &LinkModel) -> Result<Self, BoundError> {
        let model = model.effective();
        let opt = model.optima();
        if !opt.unique {
            return Err(BoundError::NonUniqueOptimum);
        }
        Ok(Self { model, opt })
    }

    fn theta(&self, c: usize, k: usize) -> f64 {
        self.model.theta().get(c, k)
    }

    fn rate(&self, k: usize) -> f64 {
        self.model.rates().rate(k)
    }

    /// `(mu* - mu_ck) / I(theta_ck, mu*/r_k)`.
    fn lai_robbins_term(&self, c: usize, k: usize) -> Result<BoundTerm, BoundError> {
        let mu_star = self.opt.mu_star;
        term(
            DecisionPair::new(c, k),
            mu_star - self.opt.mu.get(c, k),
            divergence_to(self.theta(c, k), mu_star / self.rate(k)),
        )
    }
}

/// Constant of the unstructured lower bound: a sum over every pair whose
/// rate could exceed `mu*`.
pub fn c_i(model: &LinkModel) -> Result<Bound, BoundError> {
    let p = Prepared::new(model)?;
    let best = p.opt.best;
    let mut terms = Vec::new();
    for c in 0..p.model.channels() {
        for k in p.opt.candidate_rates() {
            if DecisionPair::new(c, k) != best {
                terms.push(p.lai_robbins_term(c, k)?);
            }
        }
    }
    Ok(Bound::from_terms(terms))
}

/// `delta_c`: half the smallest drop from the channel optimum to an
/// in-range neighbouring rate; `None` when there is no neighbour.
fn half_gap_to_neighbours(opt: &OptimaSummary, c: usize) -> Option<f64> {
    let k = opt.per_channel[c].rate;
    let row = opt.mu.row(c);
    [k.checked_sub(1), Some(k + 1)]
        .into_iter()
        .flatten()
        .filter(|&j| j < row.len())
        .map(|j| (row[k] - row[j]) / 2.0)
        .reduce(f64::min)
}

/// Upper estimate of the unimodal lower-bound constant. Grows with the
/// number of channels but not with the number of rates.
pub fn c_u_prime(model: &LinkModel) -> Result<Bound, BoundError> {
    let p = Prepared::new(model)?;
    let best = p.opt.best;
    let mu_star = p.opt.mu_star;
    for (c, ch) in p.opt.per_channel.iter().enumerate() {
        if !ch.unique {
            return Err(BoundError::DegenerateChannel(c));
        }
    }
    let mut terms = Vec::new();
    for &k in &p.opt.neighbour_candidates {
        terms.push(p.lai_robbins_term(best.channel, k)?);
    }
    for (c, ch) in p.opt.per_channel.iter().enumerate() {
        if c == best.channel {
            continue;
        }
        let delta = half_gap_to_neighbours(&p.opt, c);
        let kc = ch.rate;
        let theta = p.theta(c, kc);
        let mut div = divergence_to(theta, mu_star / p.rate(kc));
        if let Some(d) = delta {
            div = div.min(divergence(theta, (theta - d / p.rate(kc)).max(0.0)));
        }
        terms.push(term(DecisionPair::new(c, kc), mu_star - p.opt.mu.get(c, kc), div)?);
        for &k in &ch.neighbour_candidates {
            let theta = p.theta(c, k);
            let div = match delta {
                Some(d) => divergence(theta, (theta + d / p.rate(k)).min(1.0)),
                None => f64::INFINITY,
            };
            terms.push(term(DecisionPair::new(c, k), mu_star - p.opt.mu.get(c, k), div)?);
        }
    }
    Ok(Bound::from_terms(terms))
}

/// Constant of the graphically unimodal lower bound: a sum over the graph
/// neighbours of the optimum whose rate could exceed `mu*`.
pub fn c_gu(model: &LinkModel, graph: &NeighborhoodGraph) -> Result<Bound, BoundError> {
    let p = Prepared::new(model)?;
    let check = graphically_unimodal_mu(&p.opt.mu, p.opt.best, graph).map_err(|_| BoundError::NonUniqueOptimum)?;
    if let Some(w) = check.witness {
        return Err(BoundError::NotGraphicallyUnimodal(w));
    }
    let terms = graph
        .neighbors(p.opt.best)
        .iter()
        .filter(|d| p.opt.is_candidate_rate(d.rate))
        .map(|d| p.lai_robbins_term(d.channel, d.rate))
        .collect::<Result<_, _>>()?;
    Ok(Bound::from_terms(terms))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelConstants {
    /// Midpoint between the channel optimum and its best neighbour.
    pub mu_tilde: Option<f64>,
    /// `None` stands for an infinite `tau_c`.
    pub tau: Option<f64>,
    /// Regret mass around the channel optimum, `sum (mu* - mu_ck)`.
    pub regret_mass: f64,
    /// The `mu*` argument of the minimum was dropped (optimal channel).
    pub dropped_optimal_argument: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrsTConstants {
    /// Smallest throughput gap between neighbouring rates.
    pub delta: Option<f64>,
    /// `delta == 0`: some neighbouring rates tie.
    pub degenerate: bool,
    pub channels: Vec<ChannelConstants>,
    pub constant: Option<f64>,
    pub reason: Option<String>,
}

pub fn crst_constants(model: &LinkModel) -> CrsTConstants {
    let model = model.effective();
    let opt = model.optima();
    let k_count = model.rate_count();
    let rates = model.rates();
    let mut delta: Option<f64> = None;
    for c in 0..model.channels() {
        for k in 1..k_count {
            let g = (opt.mu.get(c, k) - opt.mu.get(c, k - 1)).abs();
            delta = Some(delta.map_or(g, |d| d.min(g)));
        }
    }
    let mut reason: Option<BoundError> = (k_count == 1).then_some(BoundError::NoRateNeighbours);
    let channels: Vec<ChannelConstants> = (0..model.channels())
        .map(|c| {
            let kc = opt.per_channel[c].rate;
            let window: Vec<usize> = (kc.saturating_sub(1)..=(kc + 1).min(k_count - 1)).collect();
            let row = opt.mu.row(c);
            let best_neighbour = window.iter().filter(|&&k| k != kc).map(|&k| row[k]).reduce(f64::max);
            let mu_tilde = best_neighbour.map(|m| (row[kc] + m) / 2.0);
            let regret_mass = window.iter().map(|&k| opt.mu_star - row[k]).sum();
            let optimal = c == opt.best.channel;
            let mut tau = if optimal {
                f64::INFINITY
            } else {
                divergence_to(model.theta().get(c, kc), opt.mu_star / rates.rate(kc))
            };
            if let Some(mt) = mu_tilde {
                for &k in &window {
                    tau = tau.min(divergence_to(model.theta().get(c, k), mt / rates.rate(k)));
                }
            }
            if tau == 0.0 && reason.is_none() {
                reason = Some(BoundError::ZeroTau(c));
            }
            ChannelConstants {
                mu_tilde,
                tau: tau.is_finite().then_some(tau),
                regret_mass,
                dropped_optimal_argument: optimal,
            }
        })
        .collect();
    let constant = match reason {
        Some(_) => None,
        None => Some(channels.iter().map(|ch| ch.tau.map_or(0.0, |t| ch.regret_mass / t)).sum()),
    };
    CrsTConstants {
        degenerate: delta == Some(0.0),
        delta,
        channels,
        constant,
        reason: reason.map(|r| r.to_string()),
    }
}

/// A constant or the reason it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub value: Option<f64>,
    pub reason: Option<String>,
    pub terms: Vec<BoundTerm>,
}

impl From<Result<Bound, BoundError>> for BoundEntry {
    fn from(r: Result<Bound, BoundError>) -> Self {
        match r {
            Ok(b) => BoundEntry { value: Some(b.value), reason: None, terms: b.terms },
            Err(e) => BoundEntry { value: None, reason: Some(e.to_string()), terms: Vec::new() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub c_i: BoundEntry,
    pub c_u_prime: BoundEntry,
    /// The exact unimodal constant is not computed; only its upper estimate.
    pub c_u_note: String,
    pub c_gu: BoundEntry,
    pub crst: CrsTConstants,
}

pub fn bound_report(model: &LinkModel) -> BoundReport {
    let graph = NeighborhoodGraph::for_model(model);
    let c_u_prime: BoundEntry = c_u_prime(model).into();
    let c_u_note = match c_u_prime.value {
        Some(v) => format!("c_U <= c_U' = {v}"),
        None => "c_U <= c_U' (undefined)".to_string(),
    };
    BoundReport {
        c_i: c_i(model).into(),
        c_u_prime,
        c_u_note,
        c_gu: c_gu(model, &graph).into(),
        crst: crst_constants(model),
    }
}
