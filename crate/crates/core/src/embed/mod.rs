//! Reference dimensionality-reduction techniques.

pub mod classical;
pub mod eigen;
pub mod smacof;
pub mod tsne;

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pairwise_distances, DataMatrix, DistanceMetric, EmbeddingMatrix};
use crate::rng::Rng;

pub use classical::{classical_mds, classical_mds_euclidean, ClassicalMdsResult};
pub use smacof::{smacof_mds, smacof_mds_with_base, SmacofResult};
pub use tsne::{tsne, tsne_with_affinities, Affinities, TsneResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    ClassicalMds,
    SmacofMds,
    Tsne,
    Random,
}

impl Technique {
    /// Short label used in orderings and reports.
    pub fn label(self) -> &'static str {
        match self {
            Technique::ClassicalMds => "cMDS",
            Technique::SmacofMds => "MDS",
            Technique::Tsne => "t-SNE",
            Technique::Random => "RND",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mds" | "smacof" => Ok(Technique::SmacofMds),
            "classical-mds" | "cmds" => Ok(Technique::ClassicalMds),
            "tsne" | "t-sne" => Ok(Technique::Tsne),
            "random" | "rnd" => Ok(Technique::Random),
            other => Err(Error::InvalidRequest(format!("unknown technique '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmacofInit {
    /// Classical MDS plus seeded Gaussian noise of scale 1e-4.
    #[default]
    ClassicalMds,
    /// Seeded Gaussian coordinates scaled to the mean input distance.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedderConfig {
    pub technique: Technique,
    pub seed: u64,
    pub target_dim: usize,
    pub tsne_perplexity: f64,
    pub tsne_iters: usize,
    pub smacof_max_iters: usize,
    pub smacof_rel_tol: f64,
    pub smacof_init: SmacofInit,
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        Self {
            technique: Technique::SmacofMds,
            seed: 0,
            target_dim: 2,
            tsne_perplexity: 30.0,
            tsne_iters: 750,
            smacof_max_iters: 300,
            smacof_rel_tol: 1e-6,
            smacof_init: SmacofInit::ClassicalMds,
        }
    }
}

/// Uniform coordinates in the unit hypercube, independent of the data.
pub fn random_embedding(n: usize, cfg: &EmbedderConfig) -> Result<EmbeddingMatrix> {
    if n == 0 {
        return Err(Error::InvalidData("random embedding needs at least one point".into()));
    }
    let mut rng = Rng::new(cfg.seed);
    let values = (0..n * cfg.target_dim).map(|_| rng.uniform()).collect();
    EmbeddingMatrix::new(values, n, cfg.target_dim)
}

#[derive(Debug, Clone)]
/// Warnings are also emitted through `log`.
pub struct EmbedOutput {
    pub embedding: EmbeddingMatrix,
    pub warnings: Vec<String>,
}

/// Runs the configured technique on `x`. Distance-based techniques use `metric`.
pub fn embed(x: &DataMatrix, metric: DistanceMetric, cfg: &EmbedderConfig) -> Result<EmbedOutput> {
    let mut warnings = Vec::new();
    let embedding = match cfg.technique {
        Technique::ClassicalMds => {
            let r = if metric == DistanceMetric::Euclidean {
                classical_mds_euclidean(x, cfg.target_dim)?
            } else {
                classical_mds(&pairwise_distances(x, metric)?, cfg.target_dim)?
            };
            warnings.extend(r.warning());
            r.embedding
        }
        Technique::SmacofMds => {
            let d = pairwise_distances(x, metric)?;
            let r = if metric == DistanceMetric::Euclidean
                && cfg.smacof_init == SmacofInit::ClassicalMds
            {
                let base = classical_mds_euclidean(x, cfg.target_dim)?;
                smacof_mds_with_base(&d, cfg, &base.embedding)?
            } else {
                smacof_mds(&d, cfg)?
            };
            if !r.converged {
                let w = format!(
                    "SMACOF stopped after {} iterations without reaching tolerance",
                    cfg.smacof_max_iters
                );
                warn!("{w}");
                warnings.push(w);
            }
            r.embedding
        }
        Technique::Tsne => {
            let r = tsne(x, cfg)?;
            if r.perplexity_clamped {
                warnings.push(format!("perplexity clamped to {}", r.perplexity));
            }
            r.embedding
        }
        Technique::Random => random_embedding(x.rows(), cfg)?,
    };
    Ok(EmbedOutput {
        embedding,
        warnings,
    })
}
