//! Ranking experiments over techniques and metrics.
//!
//! *Experiment A* embeds each dataset repeatedly with MDS, t-SNE and a random
//! projection, scores every embedding with every metric at several uniform
//! scales, and tallies which quality ordering each metric produced.
//!
//! *Experiment B* reranks externally produced embeddings of one dataset under
//! several metrics.

use std::collections::BTreeMap;
use std::fmt;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{
    classical_mds, classical_mds_euclidean, random_embedding, smacof_mds_with_base,
    tsne_with_affinities, Affinities, EmbedderConfig, Technique,
};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, MetricKind, MetricOptions};
use crate::model::{pairwise_distances, CondensedDistances, DataMatrix, DistanceMetric, EmbeddingMatrix};
use crate::monotone::spearman_rho;
use crate::rng::derive_seed;

/// Relative tolerance under which two metric values count as tied when ranking.
pub const TIE_REL_TOL: f64 = 1e-10;

/// A best-first arrangement of technique names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TechniqueOrdering {
    order: Vec<String>,
}

impl TechniqueOrdering {
    pub fn new(order: Vec<String>) -> Result<Self> {
        for (k, name) in order.iter().enumerate() {
            if order[..k].contains(name) {
                return Err(Error::InvalidData(format!("technique '{name}' repeated in ordering")));
            }
        }
        Ok(Self { order })
    }

    /// Orders `names` by `scores`, best first. Exact ties keep roster order.
    pub fn from_scores(names: &[String], scores: &[f64], higher_is_better: bool) -> Self {
        let mut idx: Vec<usize> = (0..names.len()).collect();
        idx.sort_by(|&a, &b| {
            let o = scores[a].total_cmp(&scores[b]);
            if higher_is_better {
                o.reverse()
            } else {
                o
            }
        });
        Self {
            order: idx.into_iter().map(|k| names[k].clone()).collect(),
        }
    }

    pub fn as_slice(&self) -> &[String] {
        &self.order
    }

    /// 1-based position of `name`, if present.
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.order.iter().position(|n| n == name).map(|p| p + 1)
    }

    pub fn is_permutation_of(&self, roster: &[String]) -> bool {
        self.order.len() == roster.len() && roster.iter().all(|r| self.order.contains(r))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.split('<').map(|t| t.trim().to_string()).collect())
    }
}

impl fmt::Display for TechniqueOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.order.join("<"))
    }
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Trial counts per ordering. Every permutation of the roster is present, possibly with count 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingTally {
    roster: Vec<String>,
    counts: BTreeMap<TechniqueOrdering, u64>,
    total: u64,
}

impl OrderingTally {
    pub fn new(roster: &[String]) -> Self {
        let counts = permutations(roster)
            .into_iter()
            .map(|p| (TechniqueOrdering { order: p }, 0))
            .collect();
        Self {
            roster: roster.to_vec(),
            counts,
            total: 0,
        }
    }

    pub fn record(&mut self, ordering: &TechniqueOrdering) -> Result<()> {
        if !ordering.is_permutation_of(&self.roster) {
            return Err(Error::InvalidData(format!(
                "ordering {ordering} is not a permutation of the roster"
            )));
        }
        *self.counts.entry(ordering.clone()).or_insert(0) += 1;
        self.total += 1;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn roster(&self) -> &[String] {
        &self.roster
    }

    pub fn count(&self, ordering: &TechniqueOrdering) -> u64 {
        self.counts.get(ordering).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TechniqueOrdering, u64)> {
        self.counts.iter().map(|(k, v)| (k, *v))
    }
}

/// Fraction of tallied trials that produced `expected`.
pub fn expected_order_rate(tally: &OrderingTally, expected: &TechniqueOrdering) -> Result<f64> {
    if tally.total == 0 {
        return Err(Error::EmptyTally);
    }
    Ok(tally.count(expected) as f64 / tally.total as f64)
}

/// Pairwise Spearman agreement between metrics' technique rankings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementMatrix {
    pub metrics: Vec<MetricKind>,
    pub entries: Vec<Vec<f64>>,
}

impl AgreementMatrix {
    pub fn get(&self, a: MetricKind, b: MetricKind) -> Option<f64> {
        let i = self.metrics.iter().position(|&m| m == a)?;
        let j = self.metrics.iter().position(|&m| m == b)?;
        Some(self.entries[i][j])
    }
}

/// For every metric, concatenates the per-trial technique ranks (in a fixed
/// roster order) and correlates the resulting vectors pairwise.
pub fn metric_agreement(
    per_trial: &BTreeMap<MetricKind, Vec<TechniqueOrdering>>,
) -> Result<AgreementMatrix> {
    let len = per_trial.values().next().map_or(0, Vec::len);
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if per_trial.values().any(|v| v.len() != len) {
        return Err(Error::ShapeMismatch("per-metric ordering lists differ in length".into()));
    }
    let mut roster: Vec<String> = per_trial.values().next().unwrap()[0].as_slice().to_vec();
    roster.sort();

    let mut rank_vectors = Vec::new();
    for (metric, orderings) in per_trial {
        let mut v = Vec::with_capacity(len * roster.len());
        for o in orderings {
            if !o.is_permutation_of(&roster) {
                return Err(Error::InvalidData(format!(
                    "{metric}: ordering {o} does not match the technique roster"
                )));
            }
            v.extend(roster.iter().map(|name| o.rank_of(name).unwrap() as f64));
        }
        rank_vectors.push(v);
    }

    let metrics: Vec<MetricKind> = per_trial.keys().copied().collect();
    let m = metrics.len();
    let mut entries = vec![vec![1.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let rho = spearman_rho(&rank_vectors[i], &rank_vectors[j])?;
            entries[i][j] = rho;
            entries[j][i] = rho;
        }
    }
    Ok(AgreementMatrix { metrics, entries })
}

/// Ranks of techniques (columns) per dataset (rows) under one metric; 1 is best.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub metric: MetricKind,
    pub techniques: Vec<String>,
    pub rows: Vec<RankRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub dataset: String,
    pub ranks: Vec<usize>,
    pub values: Vec<f64>,
    /// Whether the technique's value tied with another within [`TIE_REL_TOL`].
    pub tied: Vec<bool>,
}

impl RankTable {
    pub fn has_ties(&self) -> bool {
        self.rows.iter().any(|r| r.tied.iter().any(|&t| t))
    }

    /// Appends the rows of another table over the same metric and techniques.
    pub fn extend(&mut self, other: RankTable) -> Result<()> {
        if other.metric != self.metric || other.techniques != self.techniques {
            return Err(Error::ShapeMismatch("rank tables cover different metrics or techniques".into()));
        }
        self.rows.extend(other.rows);
        Ok(())
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_REL_TOL * a.abs().max(b.abs())
}

/// Ranks values best-first; values within tolerance form a tie group ordered by name.
pub fn rank_row(dataset: &str, names: &[String], values: &[f64], higher_is_better: bool) -> RankRow {
    let t = names.len();
    let mut idx: Vec<usize> = (0..t).collect();
    idx.sort_by(|&a, &b| {
        let o = values[a].total_cmp(&values[b]);
        if higher_is_better {
            o.reverse()
        } else {
            o
        }
    });
    let mut ranks = vec![0; t];
    let mut tied = vec![false; t];
    let mut next_rank = 1;
    let mut start = 0;
    while start < t {
        let mut end = start + 1;
        while end < t && near(values[idx[start]], values[idx[end]]) {
            end += 1;
        }
        let mut group: Vec<usize> = idx[start..end].to_vec();
        group.sort_by(|&a, &b| names[a].cmp(&names[b]));
        for &k in &group {
            ranks[k] = next_rank;
            next_rank += 1;
            tied[k] = group.len() > 1;
        }
        start = end;
    }
    RankRow {
        dataset: dataset.to_string(),
        ranks,
        values: values.to_vec(),
        tied,
    }
}

/// Scores each named embedding of `x` under each metric and ranks them.
pub fn rerank_embeddings(
    dataset: &str,
    x: &DataMatrix,
    embeddings: &[(String, EmbeddingMatrix)],
    metrics: &[MetricKind],
    distance: DistanceMetric,
    opts: MetricOptions,
) -> Result<Vec<RankTable>> {
    if embeddings.is_empty() {
        return Err(Error::InvalidRequest("no embeddings to rank".into()));
    }
    for (name, e) in embeddings {
        if e.rows() != x.rows() {
            return Err(Error::ShapeMismatch(format!(
                "embedding '{name}' has {} rows but the data has {}",
                e.rows(),
                x.rows()
            )));
        }
    }
    let d_high = pairwise_distances(x, distance)?;
    let lows = embeddings
        .iter()
        .map(|(_, e)| pairwise_distances(e, distance))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = embeddings.iter().map(|(n, _)| n.clone()).collect();

    metrics
        .iter()
        .map(|&metric| {
            let values = lows
                .iter()
                .map(|l| evaluate(metric, &d_high, l, opts))
                .collect::<Result<Vec<_>>>()?;
            Ok(RankTable {
                metric,
                techniques: names.clone(),
                rows: vec![rank_row(dataset, &names, &values, metric.higher_is_better())],
            })
        })
        .collect()
}

/// A dataset with a stable name (used for seed derivation and reporting).
#[derive(Debug, Clone)]
pub struct NamedDataset {
    pub name: String,
    pub data: DataMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentAConfig {
    pub runs: usize,
    pub scales: Vec<f64>,
    pub metrics: Vec<MetricKind>,
    pub base_seed: u64,
    /// Which MDS variant fills the "MDS" slot: `SmacofMds` or `ClassicalMds`.
    pub mds: Technique,
    /// t-SNE and SMACOF settings; `technique` and `seed` are overridden per job.
    pub embedder: EmbedderConfig,
    pub distance: DistanceMetric,
    pub metric_options: MetricOptions,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl Default for ExperimentAConfig {
    fn default() -> Self {
        Self {
            runs: 10,
            scales: vec![1.0, 10.0],
            metrics: MetricKind::ALL.to_vec(),
            base_seed: 0,
            mds: Technique::SmacofMds,
            embedder: EmbedderConfig::default(),
            distance: DistanceMetric::Euclidean,
            metric_options: MetricOptions::default(),
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialValue {
    pub technique: usize,
    pub scale: f64,
    pub metric: MetricKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub dataset: String,
    pub run: usize,
    pub values: Vec<TrialValue>,
    /// Ordering per `(metric, scale index)`.
    pub orderings: BTreeMap<(MetricKind, usize), TechniqueOrdering>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedTrial {
    pub dataset: String,
    pub run: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledTally {
    pub metric: MetricKind,
    pub scale: f64,
    pub tally: OrderingTally,
}

#[derive(Debug, Clone)]
pub struct ExperimentAResult {
    /// Technique labels in roster order; also the expected best-first order.
    pub roster: Vec<String>,
    pub scales: Vec<f64>,
    pub tallies: Vec<ScaledTally>,
    pub trials: Vec<TrialRecord>,
    pub skipped: Vec<SkippedTrial>,
    /// Agreement at the first scale, pooled over all trials.
    pub agreement: Option<AgreementMatrix>,
}

impl ExperimentAResult {
    pub fn tally(&self, metric: MetricKind, scale: f64) -> Option<&OrderingTally> {
        self.tallies
            .iter()
            .find(|t| t.metric == metric && t.scale == scale)
            .map(|t| &t.tally)
    }

    pub fn expected_ordering(&self) -> TechniqueOrdering {
        TechniqueOrdering {
            order: self.roster.clone(),
        }
    }
}

struct Prepared<'a> {
    name: &'a str,
    n: usize,
    d_high: CondensedDistances,
    mds_base: EmbeddingMatrix,
    affinities: Affinities,
}

fn prepare<'a>(ds: &'a NamedDataset, cfg: &ExperimentAConfig) -> Result<Prepared<'a>> {
    let d_high = pairwise_distances(&ds.data, cfg.distance)?;
    let dim = cfg.embedder.target_dim;
    let mds_base = if cfg.distance == DistanceMetric::Euclidean {
        classical_mds_euclidean(&ds.data, dim)?.embedding
    } else {
        classical_mds(&d_high, dim)?.embedding
    };
    let affinities = Affinities::compute(&ds.data, cfg.embedder.tsne_perplexity)?;
    Ok(Prepared {
        name: &ds.name,
        n: ds.data.rows(),
        d_high,
        mds_base,
        affinities,
    })
}

fn run_trial(p: &Prepared<'_>, run: usize, roster: &[String], cfg: &ExperimentAConfig) -> Result<TrialRecord> {
    let techniques = [cfg.mds, Technique::Tsne, Technique::Random];
    let mut lows = Vec::with_capacity(techniques.len());
    for (t, label) in techniques.iter().zip(roster) {
        let ecfg = EmbedderConfig {
            technique: *t,
            seed: derive_seed(cfg.base_seed, p.name, run, label),
            ..cfg.embedder
        };
        let emb = match t {
            Technique::SmacofMds => smacof_mds_with_base(&p.d_high, &ecfg, &p.mds_base)?.embedding,
            Technique::ClassicalMds => p.mds_base.clone(),
            Technique::Tsne => tsne_with_affinities(&p.affinities, &ecfg)?.embedding,
            Technique::Random => random_embedding(p.n, &ecfg)?,
        };
        lows.push(pairwise_distances(&emb, cfg.distance)?);
    }

    let mut values = Vec::new();
    let mut orderings = BTreeMap::new();
    for (si, &scale) in cfg.scales.iter().enumerate() {
        let scaled = lows.iter().map(|l| l.scaled(scale)).collect::<Result<Vec<_>>>()?;
        for &metric in &cfg.metrics {
            let scores = scaled
                .iter()
                .map(|l| evaluate(metric, &p.d_high, l, cfg.metric_options))
                .collect::<Result<Vec<_>>>()?;
            for (technique, &value) in scores.iter().enumerate() {
                values.push(TrialValue {
                    technique,
                    scale,
                    metric,
                    value,
                });
            }
            orderings.insert(
                (metric, si),
                TechniqueOrdering::from_scores(roster, &scores, metric.higher_is_better()),
            );
        }
    }
    Ok(TrialRecord {
        dataset: p.name.to_string(),
        run,
        values,
        orderings,
    })
}

/// Runs the repeated-embedding ordering experiment.
pub fn run_experiment_a(datasets: &[NamedDataset], cfg: &ExperimentAConfig) -> Result<ExperimentAResult> {
    if cfg.runs == 0 {
        return Err(Error::InvalidRequest("runs must be at least 1".into()));
    }
    if cfg.scales.is_empty() || cfg.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidRequest("scales must be a non-empty list of positive reals".into()));
    }
    if cfg.metrics.is_empty() {
        return Err(Error::InvalidRequest("no metrics requested".into()));
    }
    if !matches!(cfg.mds, Technique::SmacofMds | Technique::ClassicalMds) {
        return Err(Error::InvalidRequest(format!("{} is not an MDS variant", cfg.mds)));
    }
    let roster: Vec<String> = [Technique::SmacofMds, Technique::Tsne, Technique::Random]
        .iter()
        .map(|t| t.label().to_string())
        .collect();

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cfg.jobs {
            b = b.num_threads(j.max(1));
        }
        b.build()
            .map_err(|e| Error::InvalidRequest(format!("thread pool: {e}")))?
    };

    let outcomes: Vec<Result<TrialRecord, SkippedTrial>> = pool.install(|| {
        datasets
            .iter()
            .map(|ds| {
                info!("experiment A: preparing {}", ds.name);
                match prepare(ds, cfg) {
                    Ok(p) => (0..cfg.runs)
                        .into_par_iter()
                        .map(|run| {
                            run_trial(&p, run, &roster, cfg).map_err(|e| SkippedTrial {
                                dataset: ds.name.clone(),
                                run,
                                reason: e.to_string(),
                            })
                        })
                        .collect::<Vec<_>>(),
                    Err(e) => (0..cfg.runs)
                        .map(|run| {
                            Err(SkippedTrial {
                                dataset: ds.name.clone(),
                                run,
                                reason: e.to_string(),
                            })
                        })
                        .collect(),
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });

    let mut trials = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(t) => trials.push(t),
            Err(s) => {
                warn!("experiment A: skipped {} run {}: {}", s.dataset, s.run, s.reason);
                skipped.push(s);
            }
        }
    }

    let mut tallies = Vec::new();
    for &metric in &cfg.metrics {
        for (si, &scale) in cfg.scales.iter().enumerate() {
            let mut tally = OrderingTally::new(&roster);
            for t in &trials {
                tally.record(&t.orderings[&(metric, si)])?;
            }
            tallies.push(ScaledTally {
                metric,
                scale,
                tally,
            });
        }
    }

    let agreement = if trials.is_empty() {
        None
    } else {
        let per_metric: BTreeMap<MetricKind, Vec<TechniqueOrdering>> = cfg
            .metrics
            .iter()
            .map(|&m| (m, trials.iter().map(|t| t.orderings[&(m, 0)].clone()).collect()))
            .collect();
        match metric_agreement(&per_metric) {
            Ok(a) => Some(a),
            Err(e) => {
                warn!("experiment A: agreement matrix unavailable: {e}");
                None
            }
        }
    };

    Ok(ExperimentAResult {
        roster,
        scales: cfg.scales.clone(),
        tallies,
        trials,
        skipped,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ordering_from_scores() {
        let n = names(&["MDS", "t-SNE", "RND"]);
        let o = TechniqueOrdering::from_scores(&n, &[0.1, 0.3, 0.2], false);
        assert_eq!(o.to_string(), "MDS<RND<t-SNE");
        let o = TechniqueOrdering::from_scores(&n, &[0.1, 0.3, 0.2], true);
        assert_eq!(o.to_string(), "t-SNE<RND<MDS");
        assert_eq!(o.rank_of("MDS"), Some(3));
        assert!(TechniqueOrdering::new(names(&["a", "a"])).is_err());
        assert_eq!(TechniqueOrdering::parse("MDS<t-SNE<RND").unwrap().as_slice(), &n[..]);
    }

    #[test]
    fn tally_and_rate() {
        let n = names(&["MDS", "t-SNE", "RND"]);
        let mut t = OrderingTally::new(&n);
        assert_eq!(t.iter().count(), 6);
        assert!(matches!(
            expected_order_rate(&t, &TechniqueOrdering::parse("MDS<t-SNE<RND").unwrap()),
            Err(Error::EmptyTally)
        ));
        let good = TechniqueOrdering::parse("MDS<t-SNE<RND").unwrap();
        let other = TechniqueOrdering::parse("RND<MDS<t-SNE").unwrap();
        for _ in 0..9 {
            t.record(&good).unwrap();
        }
        t.record(&other).unwrap();
        assert_eq!(t.total(), 10);
        assert_eq!(t.iter().map(|(_, c)| c).sum::<u64>(), 10);
        assert!((expected_order_rate(&t, &good).unwrap() - 0.9).abs() < 1e-15);
        let absent = TechniqueOrdering::parse("t-SNE<RND<MDS").unwrap();
        assert_eq!(expected_order_rate(&t, &absent).unwrap(), 0.0);
        assert!(t.record(&TechniqueOrdering::parse("a<b<c").unwrap()).is_err());
    }

    #[test]
    fn agreement_diagonal_and_reversal() {
        let fwd = TechniqueOrdering::parse("A<B<C").unwrap();
        let alt = TechniqueOrdering::parse("B<A<C").unwrap();
        let rev = |o: &TechniqueOrdering| {
            let mut v = o.as_slice().to_vec();
            v.reverse();
            TechniqueOrdering::new(v).unwrap()
        };
        let trials = vec![fwd.clone(), alt.clone(), fwd.clone()];
        let mut m = BTreeMap::new();
        m.insert(MetricKind::RawStress, trials.clone());
        m.insert(MetricKind::NormalizedStress, trials.clone());
        m.insert(MetricKind::ShepardGoodness, trials.iter().map(rev).collect());
        let a = metric_agreement(&m).unwrap();
        assert_eq!(a.get(MetricKind::RawStress, MetricKind::RawStress), Some(1.0));
        assert_eq!(a.get(MetricKind::RawStress, MetricKind::NormalizedStress), Some(1.0));
        assert_eq!(a.get(MetricKind::RawStress, MetricKind::ShepardGoodness), Some(-1.0));
        assert_eq!(
            a.get(MetricKind::ShepardGoodness, MetricKind::RawStress),
            a.get(MetricKind::RawStress, MetricKind::ShepardGoodness)
        );
    }

    #[test]
    fn agreement_length_mismatch() {
        let o = TechniqueOrdering::parse("A<B").unwrap();
        let mut m = BTreeMap::new();
        m.insert(MetricKind::RawStress, vec![o.clone(), o.clone()]);
        m.insert(MetricKind::NormalizedStress, vec![o]);
        assert!(metric_agreement(&m).is_err());
    }

    #[test]
    fn rank_row_ties_by_name() {
        let n = names(&["b", "a", "c"]);
        let r = rank_row("d", &n, &[1.0, 1.0 + 1e-13, 0.5], false);
        assert_eq!(r.ranks, vec![3, 2, 1]);
        assert_eq!(r.tied, vec![true, true, false]);
        let r = rank_row("d", &n, &[0.9, 0.1, 0.5], true);
        assert_eq!(r.ranks, vec![1, 3, 2]);
        assert!(r.tied.iter().all(|t| !t));
    }
}
