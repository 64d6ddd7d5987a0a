//! Bernoulli KL divergence, the exploration allowance and the confidence
//! bound solvers behind every index policy.
//!
//! Both solvers bisect on the bit pattern of a nonnegative float, so they
//! terminate at adjacent representable values after at most 64 steps. The
//! upper bound is searched through its distance to 1 (`1 - q`), which keeps
//! full relative precision when the bound sits very close to 1.

use thiserror::Error;

use crate::stats::ArmStats;

/// Iteration cap for the bisection solvers.
pub const MAX_BISECTION_STEPS: usize = 80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KlError {
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("the exploration allowance is undefined at n = 0")]
    ZeroSteps,
}

fn check(p: f64) -> Result<f64, KlError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(KlError::OutOfRange(p))
    }
}

/// `I(p, q) = p log(p/q) + (1-p) log((1-p)/(1-q))` with `0 log 0 = 0`.
///
/// Returns `+inf` when `q = 0 < p` or `q = 1 > p`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64, KlError> {
    Ok(divergence(check(p)?, check(q)?))
}

/// Unchecked [`kl_bernoulli`] for callers that already hold probabilities.
#[inline]
pub fn divergence(p: f64, q: f64) -> f64 {
    let mut d = 0.0;
    if p > 0.0 {
        if q <= 0.0 {
            return f64::INFINITY;
        }
        d += p * (p / q).ln();
    }
    if p < 1.0 {
        if q >= 1.0 {
            return f64::INFINITY;
        }
        d += (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
    }
    d.max(0.0)
}

/// `I(p, 1 - gap)`, evaluated without forming `1 - gap`.
#[inline]
pub fn divergence_to_complement(p: f64, gap: f64) -> f64 {
    let mut d = 0.0;
    if p > 0.0 {
        if gap >= 1.0 {
            return f64::INFINITY;
        }
        d += p * (p.ln() - (-gap).ln_1p());
    }
    if p < 1.0 {
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        d += (1.0 - p) * ((1.0 - p) / gap).ln();
    }
    d.max(0.0)
}

/// Exploration allowance `log n + 3 log(max(log n, 1))`.
///
/// The inner logarithm is clamped at 1 so the allowance is defined and
/// nonnegative for every `n >= 1`; for `n < e` it reduces to `log n`.
pub fn allowance(n: u64) -> Result<f64, KlError> {
    if n == 0 {
        return Err(KlError::ZeroSteps);
    }
    Ok(budget(n))
}

#[inline]
pub(crate) fn budget(n: u64) -> f64 {
    let l = (n.max(1) as f64).ln();
    l + 3.0 * l.max(1.0).ln()
}

/// Largest `q` in `[p, 1]` with `pulls * I(p, q) <= budget`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperRoot {
    pub prob: f64,
    /// `1 - prob`, carried with full relative precision.
    pub gap: f64,
}

/// Bisection over nonnegative floats ordered by bit pattern.
///
/// `feasible(lo)` is false, `feasible(hi)` is true and feasibility is
/// monotone; returns the smallest feasible value found.
fn bisect_bits(lo: f64, hi: f64, mut feasible: impl FnMut(f64) -> bool) -> f64 {
    let mut lo_bits = lo.to_bits();
    let mut hi_bits = hi.to_bits();
    for _ in 0..MAX_BISECTION_STEPS {
        if hi_bits - lo_bits <= 1 {
            break;
        }
        let mid_bits = lo_bits + (hi_bits - lo_bits) / 2;
        if feasible(f64::from_bits(mid_bits)) {
            hi_bits = mid_bits;
        } else {
            lo_bits = mid_bits;
        }
    }
    f64::from_bits(hi_bits)
}

/// Upper KL confidence bound in probability space.
pub fn kl_upper_bound(p: f64, pulls: u64, budget: f64) -> UpperRoot {
    if pulls == 0 || p >= 1.0 {
        return UpperRoot { prob: 1.0, gap: 0.0 };
    }
    let p = p.max(0.0);
    if budget <= 0.0 {
        return UpperRoot { prob: p, gap: 1.0 - p };
    }
    let t = pulls as f64;
    let f = budget;
    let gap = bisect_bits(0.0, 1.0 - p, |y| t * divergence_to_complement(p, y) <= f);
    let prob = 1.0 - gap;
    if prob < p {
        UpperRoot { prob: p, gap: 1.0 - p }
    } else {
        UpperRoot { prob, gap }
    }
}

/// Lower KL confidence bound in probability space: smallest `q` in `[0, p]`
/// with `pulls * I(p, q) <= budget`.
pub fn kl_lower_bound(p: f64, pulls: u64, budget: f64) -> f64 {
    if pulls == 0 || p <= 0.0 {
        return 0.0;
    }
    let p = p.min(1.0);
    if budget <= 0.0 {
        return p;
    }
    let t = pulls as f64;
    let f = budget;
    bisect_bits(0.0, p, |q| t * divergence(p, q) <= f).min(p)
}

/// Upper confidence index on the reward scale `[0, r]`.
pub fn ucb_index(stats: &ArmStats, rate: f64, budget: f64) -> f64 {
    if stats.pulls == 0 {
        return rate;
    }
    let root = kl_upper_bound(stats.success_ratio(), stats.pulls, budget);
    (rate * root.prob).clamp(stats.empirical_mean(rate), rate)
}

/// Lower confidence index on the reward scale `[0, r]`.
pub fn lcb_index(stats: &ArmStats, rate: f64, budget: f64) -> f64 {
    if stats.pulls == 0 {
        return 0.0;
    }
    let q = kl_lower_bound(stats.success_ratio(), stats.pulls, budget);
    (rate * q).clamp(0.0, stats.empirical_mean(rate))
}

/// True when the upper index of `stats` is at least `level` (reward scale),
/// decided with a single divergence evaluation.
#[inline]
pub(crate) fn upper_index_reaches(stats: &ArmStats, rate: f64, budget: f64, level: f64) -> bool {
    if level <= 0.0 || stats.pulls == 0 {
        return level <= rate;
    }
    if level > rate {
        return false;
    }
    let target = level / rate;
    let p = stats.success_ratio();
    if target <= p {
        return true;
    }
    stats.pulls as f64 * divergence(p, target) <= budget
}
