//! Isotonic regression and rank statistics.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::ShepardPairs;

/// Least-squares non-decreasing fit of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotonicFit {
    pub fitted: Vec<f64>,
    /// Weighted sum of squared residuals, `sum w_k (fitted_k - y_k)^2`.
    pub sse: f64,
}

/// Weighted isotonic regression by pool-adjacent-violators.
///
/// Blocks are kept on a stack as `(weighted mean, total weight, length)`.
/// Each new value is pushed as its own block and merged backwards while the
/// previous block's mean exceeds the top block's.
pub fn isotonic_fit(y: &[f64], weights: &[f64]) -> Result<IsotonicFit> {
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y.len() != weights.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} values but {} weights",
            y.len(),
            weights.len()
        )));
    }
    if let Some(index) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidWeight {
            index,
            value: weights[index],
        });
    }
    if let Some(k) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidData(format!("non-finite value at position {k}")));
    }

    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(y.len());
    for (&v, &w) in y.iter().zip(weights) {
        let mut cur = (v, w, 1usize);
        while let Some(&(m, bw, len)) = blocks.last() {
            if m <= cur.0 {
                break;
            }
            blocks.pop();
            let tw = bw + cur.1;
            cur = ((m * bw + cur.0 * cur.1) / tw, tw, len + cur.2);
        }
        blocks.push(cur);
    }

    let mut fitted = Vec::with_capacity(y.len());
    for &(m, _, len) in &blocks {
        fitted.extend(std::iter::repeat_n(m, len));
    }
    let sse = fitted
        .iter()
        .zip(y)
        .zip(weights)
        .map(|((f, v), w)| w * (f - v) * (f - v))
        .sum();
    Ok(IsotonicFit { fitted, sse })
}

/// Unit-weight convenience wrapper around [`isotonic_fit`].
pub fn isotonic_fit_unweighted(y: &[f64]) -> Result<IsotonicFit> {
    isotonic_fit(y, &vec![1.0; y.len()])
}

/// Average ranks (1-based); tied values share the mean of the positions they occupy.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub ranks: Vec<f64>,
}

pub fn rank_average_ties(x: &[f64]) -> Result<RankVector> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(k) = x.iter().position(|v| v.is_nan()) {
        return Err(Error::InvalidData(format!("NaN at position {k}")));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end, mean is their midpoint.
        let r = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = r;
        }
        start = end;
    }
    Ok(RankVector { ranks })
}

/// Pearson correlation. Undefined when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two observations".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant vector".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Tie-aware Spearman rank correlation: Pearson correlation of average ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two observations".into()));
    }
    let rx = rank_average_ties(x)?;
    let ry = rank_average_ties(y)?;
    pearson(&rx.ranks, &ry.ranks)
}

/// Order used for the monotone fit: by high-dimensional distance, ties by embedded distance.
fn fitting_order(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Shepard pairs sorted into fitting order.
pub fn sort_pairs_for_isotonic(pairs: &ShepardPairs) -> Result<Vec<(f64, f64)>> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = pairs.as_slice().to_vec();
    sorted.sort_unstable_by(fitting_order);
    Ok(sorted)
}

/// The embedded-distance sequence in fitting order.
pub fn sort_for_isotonic(pairs: &ShepardPairs) -> Result<Vec<f64>> {
    Ok(sort_pairs_for_isotonic(pairs)?
        .into_iter()
        .map(|(_, low)| low)
        .collect())
}
