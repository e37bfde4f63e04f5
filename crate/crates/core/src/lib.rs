//! Stress-based quality metrics for dimensionality-reduction embeddings.
//!
//! Normalized stress changes with the uniform scale of an embedding, so two
//! embeddings of the same data can swap places just by being resized. This
//! crate computes raw and normalized stress alongside three scale-invariant
//! alternatives (Shepard goodness, non-metric stress, and scale-normalized
//! stress, which evaluates normalized stress at its closed-form optimal
//! scale), plus the reference embedders and experiment harness used to
//! compare them.
//!
//! ```
//! use stress_gauge::model::{pairwise_distances, DataMatrix, DistanceMetric, EmbeddingMatrix};
//! use stress_gauge::metrics::{normalized_stress, scale_normalized_stress};
//!
//! let x = DataMatrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 2.0, 0.0]]).unwrap();
//! let p = EmbeddingMatrix::from_rows(&[[0.0, 0.0], [3.0, 0.0], [0.0, 6.0]]).unwrap();
//! let dh = pairwise_distances(&x, DistanceMetric::Euclidean).unwrap();
//! let dl = pairwise_distances(&p, DistanceMetric::Euclidean).unwrap();
//! assert!(scale_normalized_stress(&dh, &dl).unwrap() < normalized_stress(&dh, &dl).unwrap());
//! ```

pub mod embed;
pub mod error;
pub mod experiments;
pub mod io;
pub mod metrics;
pub mod model;
pub mod monotone;
pub mod rng;

pub use error::{Error, ErrorClass, Result};
pub use metrics::MetricKind;
pub use model::{CondensedDistances, DataMatrix, DistanceMetric, EmbeddingMatrix};
