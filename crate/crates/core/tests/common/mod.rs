//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use stress_gauge::model::{pairwise_distances, CondensedDistances, DataMatrix, DistanceMetric, EmbeddingMatrix};
use stress_gauge::rng::Rng;

pub fn normal_points(rng: &mut Rng, n: usize, d: usize) -> Vec<f64> {
    (0..n * d).map(|_| rng.normal()).collect()
}

/// Distances of a random `n`-point dataset in 4-D and a random 2-D embedding.
pub fn random_instance(seed: u64, n: usize) -> (CondensedDistances, CondensedDistances) {
    let mut rng = Rng::new(seed);
    let x = DataMatrix::new(normal_points(&mut rng, n, 4), n, 4).unwrap();
    let scale = rng.uniform_range(0.1, 10.0);
    let p: Vec<f64> = normal_points(&mut rng, n, 2).into_iter().map(|v| v * scale).collect();
    let p = EmbeddingMatrix::new(p, n, 2).unwrap();
    (
        pairwise_distances(&x, DistanceMetric::Euclidean).unwrap(),
        pairwise_distances(&p, DistanceMetric::Euclidean).unwrap(),
    )
}

/// Minimum SSE over every split of `y` into contiguous blocks whose
/// weighted means are non-decreasing.
pub fn isotonic_sse_oracle(y: &[f64], w: &[f64]) -> f64 {
    let n = y.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << (n - 1)) {
        let mut start = 0;
        let mut prev_mean = f64::NEG_INFINITY;
        let mut sse = 0.0;
        let mut ok = true;
        for end in 1..=n {
            if end < n && mask & (1 << (end - 1)) == 0 {
                continue;
            }
            let tw: f64 = w[start..end].iter().sum();
            let mean = if y[start..end].iter().all(|&v| v == y[start]) {
                y[start]
            } else {
                (start..end).map(|k| w[k] * y[k]).sum::<f64>() / tw
            };
            if mean < prev_mean {
                ok = false;
                break;
            }
            sse += (start..end).map(|k| w[k] * (y[k] - mean).powi(2)).sum::<f64>();
            prev_mean = mean;
            start = end;
        }
        if ok {
            best = best.min(sse);
        }
    }
    best
}

/// Rank `1 + #smaller + (#equal - 1) / 2` for each entry.
pub fn average_ranks_oracle(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
    pearson_oracle(&average_ranks_oracle(x), &average_ranks_oracle(y))
}

/// Normalized stress written out directly, for grid searches.
pub fn ns_at(h: &CondensedDistances, l: &CondensedDistances, alpha: f64) -> f64 {
    let num: f64 = h.as_slice().iter().zip(l.as_slice()).map(|(a, b)| (a - alpha * b).powi(2)).sum();
    let den: f64 = h.as_slice().iter().map(|a| a * a).sum();
    (num / den).sqrt()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
