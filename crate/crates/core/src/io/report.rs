//! Report documents and their JSON / CSV serializations.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{AgreementMatrix, OrderingTally, RankTable, ScaledTally};
use crate::metrics::MetricKind;
use crate::rng::fnv1a;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub dataset: String,
    pub technique: String,
    /// Trial index for experiment output.
    #[serde(default)]
    pub run: Option<usize>,
    pub scale: f64,
    pub metric: MetricKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCount {
    pub ordering: String,
    pub count: u64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyRecord {
    pub metric: MetricKind,
    pub scale: f64,
    pub total: u64,
    pub counts: Vec<OrderingCount>,
}

impl TallyRecord {
    pub fn from_tally(metric: MetricKind, scale: f64, tally: &OrderingTally) -> Self {
        let total = tally.total();
        Self {
            metric,
            scale,
            total,
            counts: tally
                .iter()
                .map(|(o, c)| OrderingCount {
                    ordering: o.to_string(),
                    count: c,
                    percent: if total == 0 { 0.0 } else { 100.0 * c as f64 / total as f64 },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    /// FNV-1a of the canonical JSON of the run configuration, hex.
    pub config_hash: String,
    /// Taken from `SOURCE_DATE_EPOCH` when set, so reruns stay byte-identical.
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, config: &impl Serialize) -> Self {
        let canonical = serde_json::to_string(config).unwrap_or_default();
        Self {
            seed,
            config_hash: format!("{:016x}", fnv1a(canonical.as_bytes())),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub metrics: Vec<MetricRecord>,
    pub tallies: Vec<TallyRecord>,
    pub agreement: Option<AgreementMatrix>,
    #[serde(default)]
    pub rank_tables: Vec<RankTable>,
    pub provenance: Provenance,
}

impl ReportDocument {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            metrics: Vec::new(),
            tallies: Vec::new(),
            agreement: None,
            rank_tables: Vec::new(),
            provenance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    /// `.csv` selects CSV; anything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

pub fn report_to_json(doc: &ReportDocument) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Flattens the metric records, one row per value, with a header row.
pub fn metrics_to_csv(records: &[MetricRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["dataset", "technique", "run", "scale", "metric", "value"])
        .map_err(|e| Error::Serialization(e.to_string()))?;
    for r in records {
        w.serialize(r).map_err(|e| Error::Serialization(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Serialization(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// Ordering counts laid out with one column per metric and one section per scale.
pub fn tallies_to_csv(tallies: &[ScaledTally]) -> Result<String> {
    let mut metrics: Vec<MetricKind> = Vec::new();
    let mut scales: Vec<f64> = Vec::new();
    for t in tallies {
        if !metrics.contains(&t.metric) {
            metrics.push(t.metric);
        }
        if !scales.contains(&t.scale) {
            scales.push(t.scale);
        }
    }
    let mut rows = vec![["scale".to_string(), "ordering".to_string()]
        .into_iter()
        .chain(metrics.iter().map(|m| m.short_name().to_string()))
        .collect::<Vec<_>>()];
    for &scale in &scales {
        let cols: Vec<&OrderingTally> = metrics
            .iter()
            .map(|&m| {
                tallies
                    .iter()
                    .find(|t| t.metric == m && t.scale == scale)
                    .map(|t| &t.tally)
                    .ok_or_else(|| Error::InvalidData(format!("missing tally for {m} at scale {scale}")))
            })
            .collect::<Result<_>>()?;
        let Some(first) = cols.first() else { continue };
        for (ordering, _) in first.iter() {
            let mut row = vec![scale.to_string(), ordering.to_string()];
            row.extend(cols.iter().map(|t| t.count(ordering).to_string()));
            rows.push(row);
        }
        let mut total = vec![scale.to_string(), "total".to_string()];
        total.extend(cols.iter().map(|t| t.total().to_string()));
        rows.push(total);
    }
    csv_text(rows)
}

/// Square agreement matrix with metric names on both axes.
pub fn agreement_to_csv(a: &AgreementMatrix) -> Result<String> {
    let header = std::iter::once(String::new())
        .chain(a.metrics.iter().map(|m| m.short_name().to_string()))
        .collect::<Vec<_>>();
    let body = a.metrics.iter().zip(&a.entries).map(|(m, row)| {
        std::iter::once(m.short_name().to_string())
            .chain(row.iter().map(|v| v.to_string()))
            .collect::<Vec<_>>()
    });
    csv_text(std::iter::once(header).chain(body))
}

/// One row per (metric, dataset, technique).
pub fn rank_tables_to_csv(tables: &[RankTable]) -> Result<String> {
    let header = ["metric", "dataset", "technique", "rank", "value", "tied"].map(String::from).to_vec();
    let mut rows = vec![header];
    for t in tables {
        for r in &t.rows {
            for (k, name) in t.techniques.iter().enumerate() {
                rows.push(vec![
                    t.metric.short_name().to_string(),
                    r.dataset.clone(),
                    name.clone(),
                    r.ranks[k].to_string(),
                    r.values[k].to_string(),
                    r.tied[k].to_string(),
                ]);
            }
        }
    }
    csv_text(rows)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn write_report(doc: &ReportDocument, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => report_to_json(doc)?,
        ReportFormat::Csv => metrics_to_csv(&doc.metrics)?,
    };
    write_text(path, &text)
}

/// Reads a report back. A CSV report only carries the metric records.
pub fn read_report(path: &Path, format: ReportFormat) -> Result<ReportDocument> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        ReportFormat::Json => serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::Serialization(format!("{}: {e}", path.display()))),
        ReportFormat::Csv => {
            let mut r = csv::Reader::from_reader(file);
            let metrics = r
                .deserialize()
                .collect::<std::result::Result<Vec<MetricRecord>, _>>()
                .map_err(|e| Error::Serialization(format!("{}: {e}", path.display())))?;
            Ok(ReportDocument {
                schema_version: SCHEMA_VERSION.to_string(),
                metrics,
                tallies: Vec::new(),
                agreement: None,
                rank_tables: Vec::new(),
                provenance: Provenance {
                    seed: None,
                    config_hash: String::new(),
                    timestamp: None,
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(values: &[f64]) -> ReportDocument {
        let mut d = ReportDocument::new(Provenance {
            seed: Some(3),
            config_hash: "00ff".into(),
            timestamp: None,
        });
        d.metrics = values
            .iter()
            .enumerate()
            .map(|(k, &v)| MetricRecord {
                dataset: format!("ds{k}"),
                technique: "MDS".into(),
                run: (k % 2 == 0).then_some(k),
                scale: 1.0 + k as f64 / 3.0,
                metric: MetricKind::ALL[k % 5],
                value: v,
            })
            .collect();
        d
    }

    #[test]
    fn empty_metrics_list() {
        let d = doc(&[]);
        let json = report_to_json(&d).unwrap();
        assert!(json.contains("\"metrics\": []"));
        assert!(json.contains("\"schema_version\": \"1\""));
        assert_eq!(metrics_to_csv(&d.metrics).unwrap().lines().count(), 1);
    }

    #[test]
    fn csv_row_count() {
        let d = doc(&[0.1, 0.2, 0.3]);
        assert_eq!(metrics_to_csv(&d.metrics).unwrap().lines().count(), 4);
    }

    #[test]
    fn unwritable_path() {
        let d = doc(&[1.0]);
        let err = write_report(&d, Path::new("/nonexistent-dir/r.json"), ReportFormat::Json).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn round_trips_are_lossless(values in prop::collection::vec(-1e300f64..1e300, 0..8)) {
            let d = doc(&values);
            let dir = tempfile::tempdir().unwrap();
            let j = dir.path().join("r.json");
            write_report(&d, &j, ReportFormat::Json).unwrap();
            prop_assert_eq!(read_report(&j, ReportFormat::Json).unwrap(), d.clone());
            let c = dir.path().join("r.csv");
            write_report(&d, &c, ReportFormat::Csv).unwrap();
            prop_assert_eq!(read_report(&c, ReportFormat::Csv).unwrap().metrics, d.metrics);
        }
    }
}
