//! Exact (O(N^2)) t-SNE.

use log::warn;

use super::EmbedderConfig;
use crate::error::{Error, Result};
use crate::model::{pair_count, DataMatrix, EmbeddingMatrix};
use crate::rng::Rng;

const PERPLEXITY_SEARCH_STEPS: usize = 50;
const ENTROPY_TOL: f64 = 1e-5;
const LEARNING_RATE: f64 = 200.0;
const EARLY_PHASE: usize = 250;
const EXAGGERATION: f64 = 12.0;
const INITIAL_MOMENTUM: f64 = 0.5;
const FINAL_MOMENTUM: f64 = 0.8;
const INIT_SCALE: f64 = 1e-4;
const MIN_GAIN: f64 = 0.01;
const P_FLOOR: f64 = 1e-12;
const KL_EVERY: usize = 10;

/// Symmetrized input affinities `p_ij`, condensed, summing to 1/2 over `i < j`.
#[derive(Debug, Clone)]
pub struct Affinities {
    p: Vec<f64>,
    n: usize,
    pub perplexity: f64,
    pub perplexity_clamped: bool,
}

impl Affinities {
    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// Gaussian conditional affinities with per-point bandwidths found by
    /// bisection on the entropy, then `p_ij = (p_j|i + p_i|j) / 2N`.
    pub fn compute(x: &DataMatrix, perplexity: f64) -> Result<Self> {
        let n = x.rows();
        if n < 10 {
            return Err(Error::InvalidData(format!("t-SNE needs at least 10 points, got {n}")));
        }
        if !(perplexity.is_finite() && perplexity > 0.0) {
            return Err(Error::InvalidRequest(format!("invalid perplexity {perplexity}")));
        }
        let limit = (n - 1) as f64 / 3.0;
        let (perplexity, clamped) = if perplexity >= limit {
            let p = (limit - 1.0).max(1.0);
            warn!("t-SNE perplexity {perplexity} too large for {n} points; clamped to {p}");
            (p, true)
        } else {
            (perplexity, false)
        };

        let mut sq = vec![0.0; n * n];
        for i in 0..n {
            let a = x.row(i);
            for j in i + 1..n {
                let d: f64 = a.iter().zip(x.row(j)).map(|(u, v)| (u - v) * (u - v)).sum();
                sq[i * n + j] = d;
                sq[j * n + i] = d;
            }
        }

        let target = perplexity.ln();
        let mut cond = vec![0.0; n * n];
        let mut row = vec![0.0; n];
        for i in 0..n {
            let d = &sq[i * n..(i + 1) * n];
            // Shift by the nearest-neighbour distance so the largest weight is exactly 1.
            let dmin = (0..n)
                .filter(|&j| j != i)
                .map(|j| d[j])
                .fold(f64::INFINITY, f64::min);
            let (mut beta, mut lo, mut hi) = (1.0, f64::NEG_INFINITY, f64::INFINITY);
            for _ in 0..PERPLEXITY_SEARCH_STEPS {
                let (mut sum, mut wsum) = (0.0, 0.0);
                for j in 0..n {
                    if j == i {
                        row[j] = 0.0;
                        continue;
                    }
                    let s = d[j] - dmin;
                    let w = (-beta * s).exp();
                    row[j] = w;
                    sum += w;
                    wsum += s * w;
                }
                let entropy = sum.ln() + beta * wsum / sum;
                let diff = entropy - target;
                if diff.abs() < ENTROPY_TOL {
                    break;
                }
                if diff > 0.0 {
                    lo = beta;
                    beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
                } else {
                    hi = beta;
                    beta = if lo.is_finite() { (beta + lo) / 2.0 } else { beta / 2.0 };
                }
            }
            let sum: f64 = row.iter().sum();
            for j in 0..n {
                cond[i * n + j] = row[j] / sum;
            }
        }

        let inv = 1.0 / (2.0 * n as f64);
        let mut p = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                p.push(((cond[i * n + j] + cond[j * n + i]) * inv).max(P_FLOOR));
            }
        }
        Ok(Self {
            p,
            n,
            perplexity,
            perplexity_clamped: clamped,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TsneResult {
    pub embedding: EmbeddingMatrix,
    /// `(iteration, KL(P || Q))`, sampled every 10 iterations and at the last one.
    pub kl_trace: Vec<(usize, f64)>,
    pub perplexity: f64,
    pub perplexity_clamped: bool,
}

pub fn tsne(x: &DataMatrix, cfg: &EmbedderConfig) -> Result<TsneResult> {
    let aff = Affinities::compute(x, cfg.tsne_perplexity)?;
    tsne_with_affinities(&aff, cfg)
}

/// Gradient descent on precomputed affinities.
pub fn tsne_with_affinities(aff: &Affinities, cfg: &EmbedderConfig) -> Result<TsneResult> {
    let n = aff.n;
    let dim = cfg.target_dim;
    if dim == 0 {
        return Err(Error::InvalidRequest("embedding dimension must be positive".into()));
    }
    let p = &aff.p;
    let mut rng = Rng::new(cfg.seed);
    let mut y: Vec<f64> = (0..n * dim).map(|_| INIT_SCALE * rng.normal()).collect();
    let mut update = vec![0.0f64; n * dim];
    let mut gains = vec![1.0f64; n * dim];
    let mut grad = vec![0.0; n * dim];
    let mut num = vec![0.0; p.len()];
    let mut diff = vec![0.0; dim];
    let mut kl_trace = Vec::new();
    let entropy_term: f64 = p.iter().map(|&v| v * v.ln()).sum();

    for it in 0..cfg.tsne_iters {
        let early = it < EARLY_PHASE;
        let exaggeration = if early { EXAGGERATION } else { 1.0 };
        let momentum = if early { INITIAL_MOMENTUM } else { FINAL_MOMENTUM };

        // Student-t kernel with one degree of freedom.
        let mut z = 0.0;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let mut sq = 0.0;
                for c in 0..dim {
                    let t = y[i * dim + c] - y[j * dim + c];
                    sq += t * t;
                }
                let q = 1.0 / (1.0 + sq);
                num[k] = q;
                z += q;
                k += 1;
            }
        }
        z *= 2.0;
        let inv_z = 1.0 / z;

        grad.iter_mut().for_each(|g| *g = 0.0);
        k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let q = num[k];
                let mult = (exaggeration * p[k] - q * inv_z) * q;
                k += 1;
                for c in 0..dim {
                    diff[c] = mult * (y[i * dim + c] - y[j * dim + c]);
                }
                for c in 0..dim {
                    grad[i * dim + c] += diff[c];
                    grad[j * dim + c] -= diff[c];
                }
            }
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "non-finite t-SNE gradient at iteration {it}"
            )));
        }

        for idx in 0..n * dim {
            let g = 4.0 * grad[idx];
            gains[idx] = if (g > 0.0) != (update[idx] > 0.0) {
                gains[idx] + 0.2
            } else {
                (gains[idx] * 0.8).max(MIN_GAIN)
            };
            update[idx] = momentum * update[idx] - LEARNING_RATE * gains[idx] * g;
            y[idx] += update[idx];
        }
        for c in 0..dim {
            let mean = (0..n).map(|i| y[i * dim + c]).sum::<f64>() / n as f64;
            for i in 0..n {
                y[i * dim + c] -= mean;
            }
        }

        if (it + 1) % KL_EVERY == 0 || it + 1 == cfg.tsne_iters {
            // KL for the kernel evaluated at the start of this iteration.
            let cross: f64 = p
                .iter()
                .zip(&num)
                .map(|(&pv, &q)| pv * (q * inv_z).ln())
                .sum();
            let kl = 2.0 * (entropy_term - cross);
            if !kl.is_finite() {
                return Err(Error::NumericalFailure(format!("non-finite KL at iteration {it}")));
            }
            kl_trace.push((it, kl));
        }
    }

    Ok(TsneResult {
        embedding: EmbeddingMatrix::new(y, n, dim)?,
        kl_trace,
        perplexity: aff.perplexity,
        perplexity_clamped: aff.perplexity_clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(per: usize, seed: u64) -> DataMatrix {
        let mut rng = Rng::new(seed);
        let centres = [[0.0, 0.0, 0.0], [8.0, 0.0, 0.0], [0.0, 8.0, 0.0]];
        let rows: Vec<[f64; 3]> = centres
            .iter()
            .flat_map(|c| {
                (0..per)
                    .map(|_| [c[0] + rng.normal(), c[1] + rng.normal(), c[2] + rng.normal()])
                    .collect::<Vec<_>>()
            })
            .collect();
        DataMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn affinities_are_a_distribution() {
        let x = blobs(10, 1);
        let a = Affinities::compute(&x, 5.0).unwrap();
        let total: f64 = a.as_slice().iter().sum();
        assert!((total - 0.5).abs() < 1e-6, "{total}");
        assert!(!a.perplexity_clamped);
    }

    #[test]
    fn perplexity_is_clamped_for_small_inputs() {
        let x = blobs(4, 1);
        let a = Affinities::compute(&x, 30.0).unwrap();
        assert!(a.perplexity_clamped);
        assert!(a.perplexity < (x.rows() - 1) as f64 / 3.0);
    }

    #[test]
    fn rejects_tiny_inputs() {
        let x = DataMatrix::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        assert!(tsne(&x, &EmbedderConfig::default()).is_err());
    }

    #[test]
    fn deterministic_and_finite() {
        let x = blobs(10, 2);
        let cfg = EmbedderConfig {
            tsne_iters: 300,
            tsne_perplexity: 5.0,
            seed: 4,
            ..EmbedderConfig::default()
        };
        let a = tsne(&x, &cfg).unwrap();
        let b = tsne(&x, &cfg).unwrap();
        assert_eq!(a.embedding, b.embedding);
        assert!(a.kl_trace.iter().all(|(_, v)| v.is_finite() && *v >= -1e-9));
        assert_eq!(a.kl_trace.last().unwrap().0, 299);
    }
}
