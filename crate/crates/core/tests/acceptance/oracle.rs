//! Independent reference computations. Nothing here calls into the library
//! except for plain data types.

use std::collections::HashSet;

/// Textbook Bernoulli divergence with the `0 log 0 = 0` convention.
pub fn kl(p: f64, q: f64) -> f64 {
    let a = if p == 0.0 {
        0.0
    } else if q == 0.0 {
        return f64::INFINITY;
    } else {
        p * (p.ln() - q.ln())
    };
    let b = if p == 1.0 {
        0.0
    } else if q == 1.0 {
        return f64::INFINITY;
    } else {
        (1.0 - p) * ((1.0 - p).ln() - (1.0 - q).ln())
    };
    a + b
}

/// `I(p, 1 - y)` written in terms of `y`, for residuals near `q = 1`.
pub fn kl_to_complement(p: f64, y: f64) -> f64 {
    let a = if p == 0.0 { 0.0 } else { p * (p.ln() - (-y).ln_1p()) };
    let b = if p == 1.0 { 0.0 } else { (1.0 - p) * ((1.0 - p).ln() - y.ln()) };
    a + b
}

/// Out-neighbours of `(c, k)` straight from the edge template.
pub fn neighbours(c: usize, k: usize, channels: usize, rates: usize) -> Vec<(usize, usize)> {
    let mut out = HashSet::new();
    if k > 0 {
        out.insert((c, k - 1));
    }
    if k + 1 < rates {
        out.insert((c, k + 1));
    }
    for d in 0..channels {
        if d != c {
            out.insert((d, k));
        }
        if k + 1 < rates {
            out.insert((d, k + 1));
        }
    }
    out.remove(&(c, k));
    out.into_iter().collect()
}

/// Does every vertex reach `best` along a strictly increasing path?
pub fn increasing_paths_reach(mu: &[Vec<f64>], best: (usize, usize)) -> bool {
    let channels = mu.len();
    let rates = mu[0].len();
    // reach[v]: a strictly increasing path from v ends at best
    let mut memo: Vec<Option<bool>> = vec![None; channels * rates];
    fn dfs(v: (usize, usize), mu: &[Vec<f64>], best: (usize, usize), memo: &mut Vec<Option<bool>>) -> bool {
        let (channels, rates) = (mu.len(), mu[0].len());
        if v == best {
            return true;
        }
        if let Some(r) = memo[v.0 * rates + v.1] {
            return r;
        }
        let here = mu[v.0][v.1];
        let r = neighbours(v.0, v.1, channels, rates)
            .into_iter()
            .filter(|&(c, k)| mu[c][k] > here)
            .any(|w| dfs(w, mu, best, memo));
        memo[v.0 * rates + v.1] = Some(r);
        r
    }
    (0..channels).all(|c| (0..rates).all(|k| dfs((c, k), mu, best, &mut memo)))
}

pub fn argmax_unique(mu: &[Vec<f64>]) -> Option<(usize, usize)> {
    let mut best = (0, 0);
    for (c, row) in mu.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if v > mu[best.0][best.1] {
                best = (c, k);
            }
        }
    }
    let top = mu[best.0][best.1];
    let ties = mu.iter().flatten().filter(|&&v| v == top).count();
    (ties == 1).then_some(best)
}
