//! Classical (Torgerson) scaling.

use log::warn;

use super::eigen::{jacobi_eigen, orient};
use crate::error::{Error, Result};
use crate::model::{CondensedDistances, DataMatrix, EmbeddingMatrix};

#[derive(Debug, Clone)]
pub struct ClassicalMdsResult {
    pub embedding: EmbeddingMatrix,
    /// The leading `dim` eigenvalues of the double-centred Gram matrix.
    pub eigenvalues: Vec<f64>,
    /// Output columns left at zero for lack of a positive eigenvalue.
    pub padded_columns: usize,
}

impl ClassicalMdsResult {
    pub fn warning(&self) -> Option<String> {
        (self.padded_columns > 0).then(|| {
            format!(
                "only {} positive eigenvalues; {} embedding column(s) zero-padded",
                self.eigenvalues.len() - self.padded_columns,
                self.padded_columns
            )
        })
    }
}

/// Embeds from distances via the double-centred matrix `B = -1/2 J D^2 J`.
pub fn classical_mds(d_high: &CondensedDistances, dim: usize) -> Result<ClassicalMdsResult> {
    let n = d_high.n_points();
    if dim == 0 {
        return Err(Error::InvalidRequest("embedding dimension must be positive".into()));
    }
    if n < dim + 1 {
        return Err(Error::InvalidData(format!(
            "classical MDS into {dim} dimensions needs at least {} points, got {n}",
            dim + 1
        )));
    }
    let mut b: Vec<f64> = d_high.to_square().into_iter().map(|d| d * d).collect();
    let row_mean: Vec<f64> = b.chunks_exact(n).map(|r| r.iter().sum::<f64>() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] = -0.5 * (b[i * n + j] - row_mean[i] - row_mean[j] + grand);
        }
    }
    let eig = jacobi_eigen(b, n)?;
    Ok(assemble(n, dim, &eig.values, |k, i| eig.vectors[k][i]))
}

/// Classical MDS of Euclidean distances computed through the `d × d` scatter
/// matrix of the centred data instead of the `N × N` Gram matrix.
///
/// The two matrices share their non-zero spectrum, and the embedding column
/// for eigenpair `(lambda, v)` of the scatter matrix is `X_c v`, which equals
/// `sqrt(lambda) u` for the matching Gram eigenvector `u`. The result agrees
/// with [`classical_mds`] on Euclidean distances and costs `O(N d^2)`.
pub fn classical_mds_euclidean(x: &DataMatrix, dim: usize) -> Result<ClassicalMdsResult> {
    let (n, d) = (x.rows(), x.cols());
    if dim == 0 {
        return Err(Error::InvalidRequest("embedding dimension must be positive".into()));
    }
    if n < dim + 1 {
        return Err(Error::InvalidData(format!(
            "classical MDS into {dim} dimensions needs at least {} points, got {n}",
            dim + 1
        )));
    }
    let mean: Vec<f64> = (0..d)
        .map(|c| (0..n).map(|r| x.row(r)[c]).sum::<f64>() / n as f64)
        .collect();
    let centred: Vec<f64> = (0..n)
        .flat_map(|r| x.row(r).iter().zip(&mean).map(|(v, m)| v - m).collect::<Vec<_>>())
        .collect();
    let mut scatter = vec![0.0; d * d];
    for row in centred.chunks_exact(d) {
        for a in 0..d {
            for b in a..d {
                scatter[a * d + b] += row[a] * row[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            scatter[a * d + b] = scatter[b * d + a];
        }
    }
    let eig = jacobi_eigen(scatter, d)?;

    // Project, then orient each column like the Gram-route eigenvectors.
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut values = Vec::new();
    for k in 0..dim.min(d) {
        let v = &eig.vectors[k];
        let mut col: Vec<f64> = centred
            .chunks_exact(d)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        orient(&mut col);
        columns.push(col);
        values.push(eig.values[k]);
    }
    values.resize(dim, 0.0);
    Ok(assemble(n, dim, &values, |k, i| {
        let lam = values[k];
        if k < columns.len() && lam > 0.0 {
            columns[k][i] / lam.sqrt()
        } else {
            0.0
        }
    }))
}

/// Builds the embedding from eigenvalues and a unit-eigenvector accessor `vec(k, i)`.
fn assemble(
    n: usize,
    dim: usize,
    values: &[f64],
    vec: impl Fn(usize, usize) -> f64,
) -> ClassicalMdsResult {
    let eigenvalues: Vec<f64> = values.iter().copied().take(dim).collect();
    // Eigenvalues within roundoff of zero carry no geometry.
    let scale_ref = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = scale_ref * 1e-12;
    let mut out = vec![0.0; n * dim];
    let mut padded = 0;
    for (k, &lam) in eigenvalues.iter().enumerate() {
        if lam <= floor {
            padded += 1;
            continue;
        }
        let s = lam.sqrt();
        for i in 0..n {
            out[i * dim + k] = vec(k, i) * s;
        }
    }
    padded += dim - eigenvalues.len();
    let result = ClassicalMdsResult {
        embedding: EmbeddingMatrix::new(out, n, dim).expect("finite by construction"),
        eigenvalues,
        padded_columns: padded,
    };
    if let Some(w) = result.warning() {
        warn!("classical MDS: {w}");
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::raw_stress;
    use crate::model::{pairwise_distances, DistanceMetric};

    fn dist(m: &EmbeddingMatrix) -> CondensedDistances {
        pairwise_distances(m, DistanceMetric::Euclidean).unwrap()
    }

    #[test]
    fn collinear_points_reproduced() {
        let d = CondensedDistances::new(vec![1.0, 2.0, 1.0], 3).unwrap();
        let r = classical_mds(&d, 2).unwrap();
        assert!(raw_stress(&d, &dist(&r.embedding)).unwrap() < 1e-9);
        assert_eq!(r.padded_columns, 1);
        assert!(r.warning().is_some());
    }

    #[test]
    fn unit_square_reproduced() {
        let s = 2f64.sqrt();
        // corners (0,0), (1,0), (1,1), (0,1)
        let d = CondensedDistances::new(vec![1.0, s, 1.0, 1.0, s, 1.0], 4).unwrap();
        let r = classical_mds(&d, 2).unwrap();
        let got = dist(&r.embedding);
        for (a, b) in got.as_slice().iter().zip(d.as_slice()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(r.padded_columns, 0);
    }

    #[test]
    fn duplicate_points_coincide() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [3.0, 1.0], [3.0, 1.0], [1.0, 4.0]]).unwrap();
        let d = pairwise_distances(&x, DistanceMetric::Euclidean).unwrap();
        let r = classical_mds(&d, 2).unwrap();
        for (a, b) in r.embedding.row(1).iter().zip(r.embedding.row(2)) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn scatter_route_matches_gram_route() {
        let mut rng = crate::rng::Rng::new(5);
        let rows: Vec<[f64; 4]> = (0..30)
            .map(|_| [rng.normal(), 2.0 * rng.normal(), rng.normal(), 0.5 * rng.normal()])
            .collect();
        let x = DataMatrix::from_rows(&rows).unwrap();
        let d = pairwise_distances(&x, DistanceMetric::Euclidean).unwrap();
        let a = classical_mds(&d, 2).unwrap();
        let b = classical_mds_euclidean(&x, 2).unwrap();
        for (u, v) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((u - v).abs() < 1e-8 * u.abs().max(1.0));
        }
        for (u, v) in a
            .embedding
            .points()
            .as_slice()
            .iter()
            .zip(b.embedding.points().as_slice())
        {
            assert!((u - v).abs() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn too_few_points() {
        let d = CondensedDistances::new(vec![1.0], 2).unwrap();
        assert!(classical_mds(&d, 2).is_err());
    }
}
