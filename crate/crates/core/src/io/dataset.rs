//! Dataset specifications, preprocessing, and synthetic manifolds.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::{load_csv_matrix, peek_header};
use crate::error::{Error, Result};
use crate::model::DataMatrix;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    None,
    /// Per-column rescale to `[0, 1]`; constant columns become 0.
    MinMax,
    /// Per-column zero mean, unit (population) variance; constant columns become 0.
    ZScore,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Normalization::None),
            "minmax" => Ok(Normalization::MinMax),
            "zscore" => Ok(Normalization::ZScore),
            other => Err(Error::InvalidRequest(format!("unknown normalization '{other}'"))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::None => "none",
            Normalization::MinMax => "minmax",
            Normalization::ZScore => "zscore",
        })
    }
}

pub fn normalize(x: &DataMatrix, mode: Normalization) -> DataMatrix {
    if mode == Normalization::None {
        return x.clone();
    }
    let (n, d) = (x.rows(), x.cols());
    let mut out = x.points().as_slice().to_vec();
    for c in 0..d {
        let col = (0..n).map(|r| x.row(r)[c]);
        let (shift, scale) = match mode {
            Normalization::MinMax => {
                let (lo, hi) = col.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
                (lo, hi - lo)
            }
            Normalization::ZScore => {
                let mean = col.clone().sum::<f64>() / n as f64;
                let var = col.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
                (mean, var.sqrt())
            }
            Normalization::None => unreachable!(),
        };
        for r in 0..n {
            let v = &mut out[r * d + c];
            *v = if scale > 0.0 { (*v - shift) / scale } else { 0.0 };
        }
    }
    DataMatrix::new(out, n, d).expect("normalization preserves shape and finiteness")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    SCurve,
    SwissRoll,
}

impl SyntheticKind {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::SCurve => "s_curve",
            SyntheticKind::SwissRoll => "swiss_roll",
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "s_curve" | "scurve" => Ok(SyntheticKind::SCurve),
            "swiss_roll" | "swissroll" => Ok(SyntheticKind::SwissRoll),
            other => Err(Error::InvalidRequest(format!("unknown synthetic dataset '{other}'"))),
        }
    }
}

/// Samples a 3-D synthetic manifold.
///
/// Per point the stream draws `u1`, `u2` (uniform) then three normals for the noise:
///
/// * S-curve: `t = 3 pi (u1 - 1/2)`, point `(sin t, 2 u2, sign(t) (cos t - 1))`
/// * Swiss roll: `t = 3/2 pi (1 + 2 u1)`, point `(t cos t, 21 u2, t sin t)`
pub fn generate_synthetic(kind: SyntheticKind, n: usize, noise: f64, seed: u64) -> Result<DataMatrix> {
    if n < 10 {
        return Err(Error::InvalidRequest(format!(
            "synthetic datasets need at least 10 points, got {n}"
        )));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::InvalidRequest(format!("invalid noise level {noise}")));
    }
    let mut rng = Rng::new(seed);
    let mut values = Vec::with_capacity(n * 3);
    for _ in 0..n {
        let (u1, u2) = (rng.uniform(), rng.uniform());
        let p = match kind {
            SyntheticKind::SCurve => {
                let t = 3.0 * PI * (u1 - 0.5);
                let sign = if t < 0.0 { -1.0 } else { 1.0 };
                [t.sin(), 2.0 * u2, sign * (t.cos() - 1.0)]
            }
            SyntheticKind::SwissRoll => {
                let t = 1.5 * PI * (1.0 + 2.0 * u1);
                [t * t.cos(), 21.0 * u2, t * t.sin()]
            }
        };
        for v in p {
            values.push(v + noise * rng.normal());
        }
    }
    DataMatrix::new(values, n, 3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    File(PathBuf),
    Synthetic { kind: SyntheticKind, n_points: usize, noise: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub source: DatasetSource,
    /// Column to split off as labels; ignored when the file has no such column.
    pub label_column: Option<String>,
    pub normalize: Normalization,
}

impl DatasetSpec {
    /// Short stable name: file stem or synthetic kind.
    pub fn name(&self) -> String {
        match &self.source {
            DatasetSource::File(p) => p
                .file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            DatasetSource::Synthetic { kind, .. } => kind.name().to_string(),
        }
    }

    /// Loads (or generates) and normalizes the dataset. `seed` only affects synthetic sources.
    pub fn load(&self, seed: u64) -> Result<DataMatrix> {
        let raw = match &self.source {
            DatasetSource::File(p) => {
                let label = match &self.label_column {
                    Some(name) if peek_header(p)?.is_some_and(|h| h.contains(name)) => Some(name.as_str()),
                    _ => None,
                };
                load_csv_matrix(p, label)?.data
            }
            DatasetSource::Synthetic {
                kind,
                n_points,
                noise,
            } => generate_synthetic(*kind, *n_points, *noise, seed)?,
        };
        Ok(normalize(&raw, self.normalize))
    }
}

/// Options shared by every entry of a dataset list.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetListOptions {
    pub normalize: Normalization,
    pub label_column: Option<String>,
    pub synthetic_points: usize,
    pub noise: f64,
}

impl Default for DatasetListOptions {
    fn default() -> Self {
        Self {
            normalize: Normalization::MinMax,
            label_column: Some("label".into()),
            synthetic_points: 1500,
            noise: 0.0,
        }
    }
}

/// Resolves a comma-separated list of dataset entries.
///
/// An entry is a CSV file, a directory (every `*.csv` inside, sorted by name),
/// or a synthetic kind with an optional point count (`s_curve`, `swiss_roll:500`).
/// All unresolvable entries are reported together.
pub fn resolve_dataset_list(list: &str, opts: &DatasetListOptions) -> Result<Vec<DatasetSpec>> {
    let mut specs = Vec::new();
    let mut failures = Vec::new();
    let spec = |source| DatasetSpec {
        source,
        label_column: opts.label_column.clone(),
        normalize: opts.normalize,
    };
    for entry in list.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let path = PathBuf::from(entry);
        if path.is_dir() {
            match std::fs::read_dir(&path) {
                Ok(rd) => {
                    let mut files: Vec<PathBuf> = rd
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
                        .collect();
                    files.sort();
                    if files.is_empty() {
                        failures.push(format!("{entry}: directory contains no .csv files"));
                    }
                    specs.extend(files.into_iter().map(|f| spec(DatasetSource::File(f))));
                }
                Err(e) => failures.push(format!("{entry}: {e}")),
            }
        } else if path.is_file() {
            specs.push(spec(DatasetSource::File(path)));
        } else {
            let (kind, count) = match entry.split_once(':') {
                Some((k, c)) => (k, c.parse::<usize>().map_err(|_| ()).map(Some)),
                None => (entry, Ok(None)),
            };
            match (kind.parse::<SyntheticKind>(), count) {
                (Ok(kind), Ok(count)) => specs.push(spec(DatasetSource::Synthetic {
                    kind,
                    n_points: count.unwrap_or(opts.synthetic_points),
                    noise: opts.noise,
                })),
                _ => failures.push(format!("{entry}: not a file, directory, or synthetic dataset")),
            }
        }
    }
    if !failures.is_empty() {
        return Err(Error::InvalidData(format!("unresolvable datasets: {}", failures.join("; "))));
    }
    if specs.is_empty() {
        return Err(Error::InvalidRequest("no datasets given".into()));
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_curve_shape_and_bounds() {
        let x = generate_synthetic(SyntheticKind::SCurve, 1500, 0.0, 1).unwrap();
        assert_eq!((x.rows(), x.cols()), (1500, 3));
        for i in 0..x.rows() {
            let r = x.row(i);
            assert!(r[0] * r[0] <= 1.0);
            assert!((0.0..=2.0).contains(&r[1]));
        }
    }

    #[test]
    fn swiss_roll_bounds() {
        let x = generate_synthetic(SyntheticKind::SwissRoll, 500, 0.0, 2).unwrap();
        for i in 0..x.rows() {
            let r = x.row(i);
            let t = (r[0] * r[0] + r[2] * r[2]).sqrt();
            assert!((1.5 * PI - 1e-9..=4.5 * PI + 1e-9).contains(&t));
            assert!((0.0..=21.0).contains(&r[1]));
        }
    }

    #[test]
    fn synthetic_is_reproducible() {
        let a = generate_synthetic(SyntheticKind::SCurve, 100, 0.0, 9).unwrap();
        assert_eq!(a, generate_synthetic(SyntheticKind::SCurve, 100, 0.0, 9).unwrap());
        assert_ne!(a, generate_synthetic(SyntheticKind::SCurve, 100, 0.0, 10).unwrap());
        assert!(generate_synthetic(SyntheticKind::SCurve, 9, 0.0, 9).is_err());
    }

    #[test]
    fn normalizations() {
        let x = DataMatrix::from_rows(&[[0.0, 5.0], [2.0, 5.0], [4.0, 5.0]]).unwrap();
        let m = normalize(&x, Normalization::MinMax);
        assert_eq!(m.points().as_slice(), &[0.0, 0.0, 0.5, 0.0, 1.0, 0.0]);
        let z = normalize(&x, Normalization::ZScore);
        let s = (8.0f64 / 3.0).sqrt();
        assert!((z.row(0)[0] + 2.0 / s).abs() < 1e-12);
        assert_eq!(z.row(0)[1], 0.0);
        assert_eq!(normalize(&x, Normalization::None), x);
    }

    #[test]
    fn dataset_lists() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("b.csv"), "x,y,label\n1,2,a\n3,4,b\n5,7,a\n").unwrap();
        std::fs::write(dir.path().join("a.csv"), "1,2\n3,4\n").unwrap();
        let list = format!("{},s_curve:50", dir.path().display());
        let specs = resolve_dataset_list(&list, &DatasetListOptions::default()).unwrap();
        let names: Vec<String> = specs.iter().map(DatasetSpec::name).collect();
        assert_eq!(names, vec!["a", "b", "s_curve"]);
        let b = specs[1].load(0).unwrap();
        assert_eq!((b.rows(), b.cols()), (3, 2));
        assert_eq!(specs[2].load(0).unwrap().rows(), 50);

        let err = resolve_dataset_list("nope.csv,moon", &DatasetListOptions::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nope.csv") && msg.contains("moon"), "{msg}");
    }

    #[test]
    fn parse_names() {
        assert_eq!("swiss-roll".parse::<SyntheticKind>().unwrap(), SyntheticKind::SwissRoll);
        assert_eq!("zscore".parse::<Normalization>().unwrap(), Normalization::ZScore);
        assert!("foo".parse::<Normalization>().is_err());
    }
}
