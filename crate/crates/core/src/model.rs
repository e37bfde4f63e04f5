//! Point sets and condensed pairwise distances.
//!
//! A point set is a dense row-major `N × d` grid of finite reals. The same
//! storage backs both the high-dimensional data (`DataMatrix`) and its
//! low-dimensional projection (`EmbeddingMatrix`); the newtypes only keep the
//! two roles from being swapped by accident.
//!
//! Pairwise distances are stored condensed: the `N(N-1)/2` unordered pairs
//! `(i, j)` with `i < j`, in lexicographic order. All sums over pairs in this
//! crate run over unordered pairs, so raw stress is half of the full
//! double-sum convention; every ratio-based metric is unaffected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major point storage shared by data and embedding matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Points {
    pub fn new(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if cols == 0 {
            return Err(Error::InvalidData("matrix must have at least one column".into()));
        }
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite entry in row {} (column {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { values, rows, cols })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Self::new(values, rows.len(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }
}

/// High-dimensional observations, one object per row. Requires `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(Points);

impl DataMatrix {
    pub fn new(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        Self::from_points(Points::new(values, rows, cols)?)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_points(Points::from_rows(rows)?)
    }

    pub fn from_points(points: Points) -> Result<Self> {
        if points.rows < 2 {
            return Err(Error::InvalidData(format!(
                "a data matrix needs at least 2 rows, got {}",
                points.rows
            )));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &Points {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }
}

/// Low-dimensional projection of a data matrix, one row per object.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix(Points);

impl EmbeddingMatrix {
    pub fn new(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        Ok(Self(Points::new(values, rows, cols)?))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Ok(Self(Points::from_rows(rows)?))
    }

    pub fn from_points(points: Points) -> Self {
        Self(points)
    }

    pub fn points(&self) -> &Points {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    /// Fails with `ShapeMismatch` unless the row counts agree.
    pub fn check_pairs_with(&self, data: &DataMatrix) -> Result<()> {
        if self.rows() != data.rows() {
            return Err(Error::ShapeMismatch(format!(
                "embedding has {} rows but data has {}",
                self.rows(),
                data.rows()
            )));
        }
        Ok(())
    }
}

impl AsRef<Points> for Points {
    fn as_ref(&self) -> &Points {
        self
    }
}

impl AsRef<Points> for DataMatrix {
    fn as_ref(&self) -> &Points {
        &self.0
    }
}

impl AsRef<Points> for EmbeddingMatrix {
    fn as_ref(&self) -> &Points {
        &self.0
    }
}

/// Multiplies every coordinate by `alpha`.
pub fn scale_embedding(p: &EmbeddingMatrix, alpha: f64) -> Result<EmbeddingMatrix> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidScale(alpha));
    }
    Ok(EmbeddingMatrix(p.0.map(|v| v * alpha)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    #[default]
    Euclidean,
    Manhattan,
    /// `1 - cos(a, b)`; zero vectors are at distance 0 from each other and 1 from anything else.
    Cosine,
}

impl DistanceMetric {
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            DistanceMetric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            DistanceMetric::Cosine => {
                let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
                for (x, y) in a.iter().zip(b) {
                    dot += x * y;
                    na += x * x;
                    nb += y * y;
                }
                match (na > 0.0, nb > 0.0) {
                    (false, false) => 0.0,
                    (true, true) => (1.0 - dot / (na.sqrt() * nb.sqrt())).max(0.0),
                    _ => 1.0,
                }
            }
        }
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Manhattan => "manhattan",
            DistanceMetric::Cosine => "cosine",
        })
    }
}

impl FromStr for DistanceMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceMetric::Euclidean),
            "manhattan" | "cityblock" => Ok(DistanceMetric::Manhattan),
            "cosine" => Ok(DistanceMetric::Cosine),
            other => Err(Error::InvalidRequest(format!("unknown distance metric '{other}'"))),
        }
    }
}

/// Position of the unordered pair `(i, j)`, `i < j < n`, in condensed order.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j || j >= n {
        return Err(Error::Index { i, j, n });
    }
    // Rows 0..i contribute (n-1) + (n-2) + ... + (n-i) pairs.
    Ok(i * (2 * n - i - 1) / 2 + (j - i - 1))
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The `N(N-1)/2` pairwise distances of a point set, `i < j` lexicographic.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedDistances {
    d: Vec<f64>,
    n_points: usize,
}

impl CondensedDistances {
    pub fn new(d: Vec<f64>, n_points: usize) -> Result<Self> {
        if d.len() != pair_count(n_points) {
            return Err(Error::ShapeMismatch(format!(
                "{} distances do not match {n_points} points ({} pairs)",
                d.len(),
                pair_count(n_points)
            )));
        }
        if let Some(k) = d.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidData(format!(
                "distance {k} is {} (must be finite and non-negative)",
                d[k]
            )));
        }
        Ok(Self { d, n_points })
    }

    /// Builds from a raw vector, inferring `N` from its length.
    pub fn from_vec(d: Vec<f64>) -> Result<Self> {
        let len = d.len();
        // Solve n(n-1)/2 = len.
        let n = ((1.0 + (1.0 + 8.0 * len as f64).sqrt()) / 2.0).round() as usize;
        if pair_count(n) != len {
            return Err(Error::ShapeMismatch(format!(
                "{len} is not a triangular pair count"
            )));
        }
        Self::new(d, n)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.d[i * (2 * self.n_points - i - 1) / 2 + (j - i - 1)],
            std::cmp::Ordering::Greater => self.get(j, i),
        }
    }

    /// Every entry multiplied by `alpha`, which may be zero.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidScale(alpha));
        }
        Ok(Self {
            d: self.d.iter().map(|v| v * alpha).collect(),
            n_points: self.n_points,
        })
    }

    pub fn is_all_zero(&self) -> bool {
        self.d.iter().all(|&v| v == 0.0)
    }

    /// Expands to a full symmetric `N × N` row-major matrix.
    pub fn to_square(&self) -> Vec<f64> {
        let n = self.n_points;
        let mut out = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                out[i * n + j] = self.d[k];
                out[j * n + i] = self.d[k];
                k += 1;
            }
        }
        out
    }
}

/// Computes condensed pairwise distances between the rows of `m`.
pub fn pairwise_distances<M: AsRef<Points>>(
    m: &M,
    metric: DistanceMetric,
) -> Result<CondensedDistances> {
    let p = m.as_ref();
    let n = p.rows();
    if n < 2 {
        return Err(Error::InvalidData(format!(
            "need at least 2 rows to form a distance, got {n}"
        )));
    }
    let mut d = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        let a = p.row(i);
        for j in i + 1..n {
            d.push(metric.eval(a, p.row(j)));
        }
    }
    Ok(CondensedDistances { d, n_points: n })
}

/// One Shepard-diagram point per unordered pair: (high-dimensional, embedded) distance.
#[derive(Debug, Clone, PartialEq)]
pub struct ShepardPairs {
    pairs: Vec<(f64, f64)>,
}

impl ShepardPairs {
    pub fn new(d_high: &CondensedDistances, d_low: &CondensedDistances) -> Result<Self> {
        check_same_shape(d_high, d_low)?;
        Ok(Self {
            pairs: d_high
                .as_slice()
                .iter()
                .copied()
                .zip(d_low.as_slice().iter().copied())
                .collect(),
        })
    }

    pub fn from_pairs(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(k) = pairs
            .iter()
            .position(|&(h, l)| !(h.is_finite() && l.is_finite() && h >= 0.0 && l >= 0.0))
        {
            return Err(Error::InvalidData(format!(
                "Shepard pair {k} has a negative or non-finite coordinate"
            )));
        }
        Ok(Self { pairs })
    }

    pub fn as_slice(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub(crate) fn check_same_shape(a: &CondensedDistances, b: &CondensedDistances) -> Result<()> {
    if a.len() != b.len() || a.n_points() != b.n_points() {
        return Err(Error::ShapeMismatch(format!(
            "distance vectors cover {} and {} points",
            a.n_points(),
            b.n_points()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_three_four_five() {
        let m = DataMatrix::from_rows(&[[0.0, 0.0], [3.0, 4.0]]).unwrap();
        let d = pairwise_distances(&m, DistanceMetric::Euclidean).unwrap();
        assert_eq!(d.as_slice(), &[5.0]);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let m = DataMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]).unwrap();
        let d = pairwise_distances(&m, DistanceMetric::Euclidean).unwrap();
        assert_eq!(d.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn right_triangle_distances() {
        let m = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]]).unwrap();
        let d = pairwise_distances(&m, DistanceMetric::Euclidean).unwrap();
        assert_eq!(d.as_slice()[0], 1.0);
        assert_eq!(d.as_slice()[1], 2.0);
        assert!((d.as_slice()[2] - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn other_metrics() {
        let m = DataMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [2.0, 0.0]]).unwrap();
        let man = pairwise_distances(&m, DistanceMetric::Manhattan).unwrap();
        assert_eq!(man.as_slice(), &[3.0, 1.0, 4.0]);
        let cos = pairwise_distances(&m, DistanceMetric::Cosine).unwrap();
        assert!((cos.as_slice()[0] - 1.0).abs() < 1e-15);
        assert!(cos.as_slice()[1].abs() < 1e-15);
    }

    #[test]
    fn non_finite_entry_names_row() {
        let err = DataMatrix::from_rows(&[[0.0, 1.0], [f64::NAN, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidData(ref m) if m.contains("row 1")), "{err}");
    }

    #[test]
    fn single_row_rejected() {
        assert!(DataMatrix::from_rows(&[[0.0, 1.0]]).is_err());
        let e = EmbeddingMatrix::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(pairwise_distances(&e, DistanceMetric::Euclidean).is_err());
    }

    #[test]
    fn condensed_index_matches_enumeration() {
        assert_eq!(condensed_index(0, 1, 4).unwrap(), 0);
        assert_eq!(condensed_index(2, 3, 4).unwrap(), 5);
        assert_eq!(condensed_index(0, 3, 4).unwrap(), 2);
        for n in 2..12 {
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(condensed_index(i, j, n).unwrap(), k);
                    k += 1;
                }
            }
            assert_eq!(k, pair_count(n));
        }
    }

    #[test]
    fn condensed_index_errors() {
        assert!(matches!(condensed_index(1, 1, 4), Err(Error::Index { .. })));
        assert!(matches!(condensed_index(2, 1, 4), Err(Error::Index { .. })));
        assert!(matches!(condensed_index(0, 4, 4), Err(Error::Index { .. })));
    }

    #[test]
    fn scale_embedding_basics() {
        let p = EmbeddingMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(scale_embedding(&p, 1.0).unwrap(), p);
        let q = scale_embedding(&p, 2.0).unwrap();
        assert_eq!(q.row(1), &[2.0, 0.0]);
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(scale_embedding(&p, bad), Err(Error::InvalidScale(_))));
        }
    }

    #[test]
    fn from_vec_infers_point_count() {
        let d = CondensedDistances::from_vec(vec![1.0; 6]).unwrap();
        assert_eq!(d.n_points(), 4);
        assert!(CondensedDistances::from_vec(vec![1.0; 5]).is_err());
        assert!(CondensedDistances::new(vec![-1.0], 2).is_err());
    }

    #[test]
    fn square_round_trip() {
        let d = CondensedDistances::new(vec![1.0, 2.0, 3.0], 3).unwrap();
        let sq = d.to_square();
        assert_eq!(sq, vec![0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 2.0, 3.0, 0.0]);
        assert_eq!(d.get(2, 1), 3.0);
        assert_eq!(d.get(1, 1), 0.0);
    }
}
