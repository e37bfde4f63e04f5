//! Metric MDS by stress majorization (SMACOF) with unit weights.

use super::classical::classical_mds;
use super::{EmbedderConfig, SmacofInit};
use crate::error::{Error, Result};
use crate::model::{CondensedDistances, EmbeddingMatrix};
use crate::rng::Rng;

const INIT_NOISE: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct SmacofResult {
    pub embedding: EmbeddingMatrix,
    /// Raw stress of each iterate, starting with the initial configuration.
    pub stress_trace: Vec<f64>,
    pub converged: bool,
}

/// Runs SMACOF from the configured initialization.
pub fn smacof_mds(d_high: &CondensedDistances, cfg: &EmbedderConfig) -> Result<SmacofResult> {
    let start = initial_configuration(d_high, cfg, None)?;
    smacof_from(d_high, start, cfg)
}

/// Like [`smacof_mds`], reusing a precomputed classical-MDS embedding for the
/// deterministic part of the initialization.
pub fn smacof_mds_with_base(
    d_high: &CondensedDistances,
    cfg: &EmbedderConfig,
    classical: &EmbeddingMatrix,
) -> Result<SmacofResult> {
    let start = initial_configuration(d_high, cfg, Some(classical))?;
    smacof_from(d_high, start, cfg)
}

fn initial_configuration(
    d_high: &CondensedDistances,
    cfg: &EmbedderConfig,
    classical: Option<&EmbeddingMatrix>,
) -> Result<Vec<f64>> {
    let n = d_high.n_points();
    let dim = cfg.target_dim;
    if n < 3 {
        return Err(Error::InvalidData(format!("SMACOF needs at least 3 points, got {n}")));
    }
    let mut rng = Rng::new(cfg.seed);
    match cfg.smacof_init {
        SmacofInit::ClassicalMds => {
            let base = match classical {
                Some(c) => c.points().as_slice().to_vec(),
                None => classical_mds(d_high, dim)?.embedding.points().as_slice().to_vec(),
            };
            if base.len() != n * dim {
                return Err(Error::ShapeMismatch(format!(
                    "initial embedding has {} values, expected {n}x{dim}",
                    base.len()
                )));
            }
            Ok(base.into_iter().map(|v| v + INIT_NOISE * rng.normal()).collect())
        }
        SmacofInit::Random => {
            let spread = d_high.as_slice().iter().sum::<f64>() / d_high.len() as f64;
            Ok((0..n * dim).map(|_| spread * rng.normal()).collect())
        }
    }
}

/// One pass over all pairs: returns the raw stress of `x` and writes its
/// Guttman transform `x+_i = (1/N) sum_j (d_ij / delta_ij) (x_i - x_j)` into `next`.
fn guttman_step(d_high: &[f64], x: &[f64], next: &mut [f64], n: usize, dim: usize) -> f64 {
    next.iter_mut().for_each(|v| *v = 0.0);
    let mut stress = 0.0;
    let mut diff = vec![0.0; dim];
    let mut k = 0;
    for i in 0..n {
        let xi = &x[i * dim..(i + 1) * dim];
        for j in i + 1..n {
            let xj = &x[j * dim..(j + 1) * dim];
            let mut sq = 0.0;
            for c in 0..dim {
                diff[c] = xi[c] - xj[c];
                sq += diff[c] * diff[c];
            }
            let delta = sq.sqrt();
            let target = d_high[k];
            k += 1;
            stress += (target - delta) * (target - delta);
            if delta > 0.0 {
                let ratio = target / delta;
                for c in 0..dim {
                    let t = ratio * diff[c];
                    next[i * dim + c] += t;
                    next[j * dim + c] -= t;
                }
            }
        }
    }
    let inv_n = 1.0 / n as f64;
    next.iter_mut().for_each(|v| *v *= inv_n);
    stress
}

fn smacof_from(d_high: &CondensedDistances, mut x: Vec<f64>, cfg: &EmbedderConfig) -> Result<SmacofResult> {
    let n = d_high.n_points();
    let dim = cfg.target_dim;
    let d = d_high.as_slice();
    let mut next = vec![0.0; x.len()];
    let mut trace: Vec<f64> = Vec::with_capacity(cfg.smacof_max_iters + 1);
    let mut converged = false;

    for _ in 0..=cfg.smacof_max_iters {
        let stress = guttman_step(d, &x, &mut next, n, dim);
        if !stress.is_finite() {
            return Err(Error::NumericalFailure("SMACOF stress became non-finite".into()));
        }
        if let Some(&prev) = trace.last() {
            trace.push(stress);
            if prev == 0.0 || (prev - stress) / prev < cfg.smacof_rel_tol {
                converged = true;
                break;
            }
        } else {
            trace.push(stress);
            if stress == 0.0 {
                converged = true;
                break;
            }
        }
        if trace.len() > cfg.smacof_max_iters {
            break;
        }
        std::mem::swap(&mut x, &mut next);
    }

    Ok(SmacofResult {
        embedding: EmbeddingMatrix::new(x, n, dim)?,
        stress_trace: trace,
        converged,
    })
}
