use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use stress_gauge::embed::{embed, EmbedderConfig, SmacofInit, Technique};
use stress_gauge::experiments::{
    expected_order_rate, rerank_embeddings, run_experiment_a, ExperimentAConfig, NamedDataset, RankTable,
};
use stress_gauge::io::{
    agreement_to_csv, load_embedding_csv, plot_shepard, plot_stress_scale_curve, rank_tables_to_csv,
    report::{report_to_json, TallyRecord},
    resolve_dataset_list, tallies_to_csv, write_embedding_csv, write_text, DatasetListOptions, DatasetSource,
    DatasetSpec, MetricRecord, Normalization, Provenance, ReportDocument,
};
use stress_gauge::metrics::{evaluate, optimal_scale, stress_scale_curve, AlphaGrid, MetricOptions};
use stress_gauge::model::{pairwise_distances, scale_embedding, ShepardPairs};
use stress_gauge::monotone::{isotonic_fit_unweighted, sort_for_isotonic};
use stress_gauge::rng::derive_seed;
use stress_gauge::{DataMatrix, DistanceMetric, EmbeddingMatrix, Error, ErrorClass, MetricKind};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  usage error (bad flags or values, unsupported request)
  2  data error (unreadable or malformed input, shape mismatch)
  3  numerical failure (degenerate input, non-finite optimizer state)";

/// Stress-based quality metrics for dimensionality-reduction embeddings.
#[derive(Parser)]
#[command(name = "stress-gauge", version, after_help = EXIT_CODES)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quality metrics of an embedding of a dataset.
    #[command(after_help = EXIT_CODES)]
    Metrics(MetricsArgs),
    /// Sample a scale-sensitive metric over the embedding scale.
    #[command(after_help = EXIT_CODES)]
    Curve(CurveArgs),
    /// Draw the Shepard diagram of an embedding with its monotone fit.
    #[command(after_help = EXIT_CODES)]
    Shepard(ShepardArgs),
    /// Embed a dataset with one of the reference techniques.
    #[command(after_help = EXIT_CODES)]
    Embed(EmbedArgs),
    /// Tally technique orderings over repeated embeddings of several datasets.
    #[command(name = "experiment-a", after_help = EXIT_CODES)]
    ExperimentA(ExperimentArgs),
    /// Rank several embeddings of one dataset under each metric.
    #[command(after_help = EXIT_CODES)]
    Rerank(RerankArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Dataset CSV (numeric columns, optional header row).
    #[arg(long)]
    data: PathBuf,
    /// Header column holding labels; dropped from the features, ignored if absent.
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Per-column preprocessing: none, minmax or zscore.
    #[arg(long, default_value = "none", value_parser = parse_from_str::<Normalization>)]
    normalize: Normalization,
    /// Distance for both spaces: euclidean, manhattan or cosine.
    #[arg(long, default_value = "euclidean", value_parser = parse_from_str::<DistanceMetric>)]
    distance: DistanceMetric,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Embedding CSV with one row per data row.
    #[arg(long)]
    embedding: PathBuf,
    /// Comma-separated subset of rs, ns, sgs, nms, sns.
    #[arg(long, default_value = "rs,ns,sgs,nms,sns", value_parser = parse_metric_list)]
    metrics: MetricList,
    /// Multiply the embedding by this non-negative factor first.
    #[arg(long, default_value_t = 1.0, value_parser = parse_scale, allow_negative_numbers = true)]
    scale: f64,
    /// Report the square root of non-metric stress (Kruskal's form).
    #[arg(long)]
    kruskal_sqrt: bool,
    /// Write a JSON report here instead of printing a table.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    embedding: PathBuf,
    /// Scale-sensitive metric: rs or ns.
    #[arg(long, default_value = "ns", value_parser = parse_from_str::<MetricKind>)]
    metric: MetricKind,
    /// Grid points on [0, 2 alpha*] (alpha* is added to the grid).
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Output file; `.svg` draws the curve, `.csv` writes alpha,value rows.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ShepardArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    embedding: PathBuf,
    /// Output SVG file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    data: DataArgs,
    /// mds (SMACOF), classical-mds, tsne or random.
    #[arg(long, value_parser = parse_from_str::<Technique>)]
    method: Technique,
    /// Seed; falls back to STRESS_GAUGE_SEED, then 0.
    #[arg(long, env = "STRESS_GAUGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Embedding dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// t-SNE perplexity.
    #[arg(long, default_value_t = 30.0)]
    perplexity: f64,
    /// t-SNE iterations.
    #[arg(long, default_value_t = 750)]
    tsne_iters: usize,
    /// SMACOF iteration cap.
    #[arg(long, default_value_t = 300)]
    smacof_max_iters: usize,
    /// SMACOF start: classical-mds or random.
    #[arg(long, default_value = "classical-mds", value_parser = parse_smacof_init)]
    smacof_init: SmacofInit,
    /// Output CSV (headerless); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated CSV files, directories of CSVs, or synthetic sets
    /// (`s_curve`, `swiss_roll`, optionally `:N` points).
    #[arg(long)]
    datasets: String,
    /// Embeddings per technique and dataset.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Comma-separated positive scale factors applied to every embedding.
    #[arg(long, default_value = "1,10", value_parser = parse_scale_list)]
    scales: ScaleList,
    #[arg(long, default_value = "rs,ns,sgs,nms,sns", value_parser = parse_metric_list)]
    metrics: MetricList,
    /// Seed; falls back to STRESS_GAUGE_SEED, then 0.
    #[arg(long, env = "STRESS_GAUGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Output directory for tallies.csv, agreement.csv, metrics.csv and report.json.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: logical core count).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "minmax", value_parser = parse_from_str::<Normalization>)]
    normalize: Normalization,
    /// Label column dropped from file datasets when present.
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Default point count for synthetic datasets.
    #[arg(long, default_value_t = 1500)]
    synthetic_points: usize,
    /// Gaussian noise level for synthetic datasets.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// MDS variant: mds (SMACOF) or classical-mds.
    #[arg(long, default_value = "mds", value_parser = parse_from_str::<Technique>)]
    mds: Technique,
    #[arg(long, default_value_t = 30.0)]
    perplexity: f64,
    #[arg(long, default_value_t = 750)]
    tsne_iters: usize,
    #[arg(long)]
    kruskal_sqrt: bool,
}

#[derive(Args)]
struct RerankArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Two or more embedding CSVs (space or comma separated).
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    embeddings: Vec<PathBuf>,
    #[arg(long, default_value = "ns,sns", value_parser = parse_metric_list)]
    metrics: MetricList,
    #[arg(long)]
    kruskal_sqrt: bool,
    /// Output file; `.csv` writes rank rows, anything else a JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone)]
struct MetricList(Vec<MetricKind>);

#[derive(Clone)]
struct ScaleList(Vec<f64>);

fn parse_metric_list(s: &str) -> Result<MetricList, String> {
    MetricKind::parse_list(s).map(MetricList).map_err(|e| e.to_string())
}

fn parse_scale(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("'{s}' is not a non-negative real")),
    }
}

fn parse_scale_list(s: &str) -> Result<ScaleList, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(format!("'{}' is not a positive real", t.trim())),
        })
        .collect::<Result<_, _>>()
        .map(ScaleList)
}

fn parse_smacof_init(s: &str) -> Result<SmacofInit, String> {
    match s {
        "classical-mds" | "classical" => Ok(SmacofInit::ClassicalMds),
        "random" => Ok(SmacofInit::Random),
        other => Err(format!("unknown SMACOF init '{other}'")),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Usage => 1,
            ErrorClass::Data => 2,
            ErrorClass::Numerical => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Metrics(a) => cmd_metrics(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Shepard(a) => cmd_shepard(a),
        Command::Embed(a) => cmd_embed(a),
        Command::ExperimentA(a) => cmd_experiment_a(a),
        Command::Rerank(a) => cmd_rerank(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn file_spec(path: &Path, label_column: &str, normalize: Normalization) -> DatasetSpec {
    DatasetSpec {
        source: DatasetSource::File(path.to_path_buf()),
        label_column: Some(label_column.to_string()),
        normalize,
    }
}

fn load_data(a: &DataArgs) -> CliResult<(String, DataMatrix)> {
    let spec = file_spec(&a.data, &a.label_column, a.normalize);
    Ok((spec.name(), spec.load(0)?))
}

fn load_paired_embedding(path: &Path, data: &DataMatrix) -> CliResult<EmbeddingMatrix> {
    let e = load_embedding_csv(path)?;
    e.check_pairs_with(data).map_err(|err| Failure {
        code: 2,
        message: format!("{}: {err}", path.display()),
    })?;
    Ok(e)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn print_table(rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = std::io::stdout().lock();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
}

#[derive(Serialize)]
struct Invocation<'a, T: Serialize> {
    command: &'a str,
    args: T,
}

fn cmd_metrics(a: MetricsArgs) -> CliResult {
    let (name, x) = load_data(&a.data)?;
    let p = load_paired_embedding(&a.embedding, &x)?;
    let opts = MetricOptions {
        kruskal_sqrt: a.kruskal_sqrt,
    };
    let dh = pairwise_distances(&x, a.data.distance)?;
    // Scale 0 collapses every point onto one, whatever the distance.
    let dl = if a.scale > 0.0 {
        pairwise_distances(&scale_embedding(&p, a.scale)?, a.data.distance)?
    } else {
        pairwise_distances(&p, a.data.distance)?.scaled(0.0)?
    };
    let technique = stem(&a.embedding);
    let mut records = Vec::new();
    for &m in &a.metrics.0 {
        records.push(MetricRecord {
            dataset: name.clone(),
            technique: technique.clone(),
            run: None,
            scale: a.scale,
            metric: m,
            value: evaluate(m, &dh, &dl, opts)?,
        });
    }
    match a.out {
        Some(out) => {
            let config = (
                a.data.data.display().to_string(),
                a.embedding.display().to_string(),
                &a.metrics.0,
                a.scale,
                a.data.normalize,
                a.data.distance.to_string(),
                a.kruskal_sqrt,
            );
            let mut doc = ReportDocument::new(Provenance::new(
                None,
                &Invocation {
                    command: "metrics",
                    args: config,
                },
            ));
            doc.metrics = records;
            write_text(&out, &report_to_json(&doc)?)?;
        }
        None => {
            let mut rows = vec![vec!["metric".to_string(), "value".to_string()]];
            rows.extend(records.iter().map(|r| vec![r.metric.to_string(), r.value.to_string()]));
            print_table(&rows);
        }
    }
    Ok(())
}

fn cmd_curve(a: CurveArgs) -> CliResult {
    if a.metric.is_scale_invariant() {
        return Err(usage(format!(
            "{} is scale invariant: its curve is constant",
            a.metric
        )));
    }
    let ext = a
        .out
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let svg = match ext.as_deref() {
        Some("svg") => true,
        Some("csv") => false,
        _ => return Err(usage("--out must end in .svg or .csv")),
    };
    let (_, x) = load_data(&a.data)?;
    let p = load_paired_embedding(&a.embedding, &x)?;
    let dh = pairwise_distances(&x, a.data.distance)?;
    let dl = pairwise_distances(&p, a.data.distance)?;
    let samples = stress_scale_curve(&dh, &dl, a.metric, &AlphaGrid::AroundOptimum { samples: a.samples })?;
    let opts = MetricOptions::default();
    let minimum = match optimal_scale(&dh, &dl) {
        Ok(s) => (s.alpha_star, evaluate(a.metric, &dh, &dl.scaled(s.alpha_star)?, opts)?),
        Err(Error::DegenerateEmbedding) => samples
            .iter()
            .min_by(|u, v| u.value.total_cmp(&v.value))
            .map(|s| (s.alpha, s.value))
            .expect("curve has samples"),
        Err(e) => return Err(e.into()),
    };
    if svg {
        plot_stress_scale_curve(&samples, minimum, &a.metric.to_string().to_uppercase(), &a.out)?;
    } else {
        let mut text = String::from("alpha,value\n");
        for s in &samples {
            text.push_str(&format!("{},{}\n", s.alpha, s.value));
        }
        write_text(&a.out, &text)?;
    }
    print_table(&[
        vec!["alpha*".into(), minimum.0.to_string()],
        vec![format!("{} at alpha*", a.metric), minimum.1.to_string()],
    ]);
    Ok(())
}

fn cmd_shepard(a: ShepardArgs) -> CliResult {
    let (_, x) = load_data(&a.data)?;
    let p = load_paired_embedding(&a.embedding, &x)?;
    let dh = pairwise_distances(&x, a.data.distance)?;
    let dl = pairwise_distances(&p, a.data.distance)?;
    let pairs = ShepardPairs::new(&dh, &dl)?;
    let fit = isotonic_fit_unweighted(&sort_for_isotonic(&pairs)?)?;
    plot_shepard(&pairs, &fit, &a.out)?;
    let opts = MetricOptions::default();
    print_table(&[
        vec!["sgs".into(), evaluate(MetricKind::ShepardGoodness, &dh, &dl, opts)?.to_string()],
        vec!["nms".into(), evaluate(MetricKind::NonMetricStress, &dh, &dl, opts)?.to_string()],
    ]);
    Ok(())
}

fn cmd_embed(a: EmbedArgs) -> CliResult {
    if a.dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    if !(a.perplexity.is_finite() && a.perplexity > 0.0) {
        return Err(usage("--perplexity must be positive"));
    }
    let (_, x) = load_data(&a.data)?;
    let cfg = EmbedderConfig {
        technique: a.method,
        seed: a.seed,
        target_dim: a.dim,
        tsne_perplexity: a.perplexity,
        tsne_iters: a.tsne_iters,
        smacof_max_iters: a.smacof_max_iters,
        smacof_init: a.smacof_init,
        ..EmbedderConfig::default()
    };
    let out = embed(&x, a.data.distance, &cfg)?;
    match a.out {
        Some(path) => write_embedding_csv(&out.embedding, &path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            for row in out.embedding.points().iter_rows() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(stdout, "{}", cells.join(","));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExperimentConfigRecord<'a> {
    datasets: &'a [DatasetSpec],
    runs: usize,
    scales: &'a [f64],
    metrics: &'a [MetricKind],
    mds: Technique,
    embedder: EmbedderConfig,
    distance: String,
    kruskal_sqrt: bool,
}

fn cmd_experiment_a(a: ExperimentArgs) -> CliResult {
    if a.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    if !matches!(a.mds, Technique::SmacofMds | Technique::ClassicalMds) {
        return Err(usage(format!("--mds must be mds or classical-mds, got {}", a.mds)));
    }
    if a.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    let list_opts = DatasetListOptions {
        normalize: a.normalize,
        label_column: Some(a.label_column.clone()),
        synthetic_points: a.synthetic_points,
        noise: a.noise,
    };
    let specs = resolve_dataset_list(&a.datasets, &list_opts)?;

    let mut datasets = Vec::new();
    let mut failures = Vec::new();
    for spec in &specs {
        let name = spec.name();
        match spec.load(derive_seed(a.seed, &name, 0, "dataset")) {
            Ok(data) => datasets.push(NamedDataset { name, data }),
            Err(e) => failures.push(format!("  {name}: {e}")),
        }
    }
    if !failures.is_empty() {
        return Err(Failure {
            code: 2,
            message: format!("failed to load datasets:\n{}", failures.join("\n")),
        });
    }
    let mut seen = BTreeMap::new();
    for d in &datasets {
        if seen.insert(d.name.clone(), ()).is_some() {
            return Err(usage(format!("dataset name '{}' appears twice", d.name)));
        }
    }

    let cfg = ExperimentAConfig {
        runs: a.runs,
        scales: a.scales.0.clone(),
        metrics: a.metrics.0.clone(),
        base_seed: a.seed,
        mds: a.mds,
        embedder: EmbedderConfig {
            tsne_perplexity: a.perplexity,
            tsne_iters: a.tsne_iters,
            ..EmbedderConfig::default()
        },
        distance: DistanceMetric::Euclidean,
        metric_options: MetricOptions {
            kruskal_sqrt: a.kruskal_sqrt,
        },
        jobs: a.jobs,
    };
    let result = run_experiment_a(&datasets, &cfg)?;
    if result.trials.is_empty() {
        return Err(Failure {
            code: 3,
            message: "every trial failed".into(),
        });
    }

    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    write_text(&a.out.join("tallies.csv"), &tallies_to_csv(&result.tallies)?)?;
    if let Some(ag) = &result.agreement {
        write_text(&a.out.join("agreement.csv"), &agreement_to_csv(ag)?)?;
    }

    let mut metrics = Vec::new();
    for t in &result.trials {
        for v in &t.values {
            metrics.push(MetricRecord {
                dataset: t.dataset.clone(),
                technique: result.roster[v.technique].clone(),
                run: Some(t.run),
                scale: v.scale,
                metric: v.metric,
                value: v.value,
            });
        }
    }
    write_text(&a.out.join("metrics.csv"), &stress_gauge::io::report::metrics_to_csv(&metrics)?)?;

    let record = ExperimentConfigRecord {
        datasets: &specs,
        runs: cfg.runs,
        scales: &cfg.scales,
        metrics: &cfg.metrics,
        mds: cfg.mds,
        embedder: cfg.embedder,
        distance: cfg.distance.to_string(),
        kruskal_sqrt: a.kruskal_sqrt,
    };
    let mut doc = ReportDocument::new(Provenance::new(Some(a.seed), &record));
    doc.metrics = metrics;
    doc.tallies = result
        .tallies
        .iter()
        .map(|t| TallyRecord::from_tally(t.metric, t.scale, &t.tally))
        .collect();
    doc.agreement = result.agreement.clone();
    write_text(&a.out.join("report.json"), &report_to_json(&doc)?)?;

    let expected = result.expected_ordering();
    let mut rows = vec![vec![
        "metric".to_string(),
        "scale".to_string(),
        format!("% {expected}"),
        "trials".to_string(),
    ]];
    for t in &result.tallies {
        rows.push(vec![
            t.metric.to_string(),
            t.scale.to_string(),
            format!("{:.1}", 100.0 * expected_order_rate(&t.tally, &expected)?),
            t.tally.total().to_string(),
        ]);
    }
    print_table(&rows);
    for s in &result.skipped {
        eprintln!("warning: skipped {} run {}: {}", s.dataset, s.run, s.reason);
    }
    Ok(())
}

fn cmd_rerank(a: RerankArgs) -> CliResult {
    if a.embeddings.len() < 2 {
        return Err(usage("rerank needs at least two embeddings"));
    }
    let (name, x) = load_data(&a.data)?;
    let stems: Vec<String> = a.embeddings.iter().map(|p| stem(p)).collect();
    let unique_stems = stems.iter().collect::<std::collections::BTreeSet<_>>().len() == stems.len();
    let mut named = Vec::new();
    for (path, s) in a.embeddings.iter().zip(&stems) {
        let label = if unique_stems { s.clone() } else { path.display().to_string() };
        named.push((label, load_paired_embedding(path, &x)?));
    }
    let opts = MetricOptions {
        kruskal_sqrt: a.kruskal_sqrt,
    };
    let tables = rerank_embeddings(&name, &x, &named, &a.metrics.0, a.data.distance, opts)?;
    match &a.out {
        Some(out) if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => {
            write_text(out, &rank_tables_to_csv(&tables)?)?;
        }
        Some(out) => {
            let config = (
                a.data.data.display().to_string(),
                a.embeddings.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                &a.metrics.0,
                a.data.normalize,
                a.data.distance.to_string(),
            );
            let mut doc = ReportDocument::new(Provenance::new(
                None,
                &Invocation {
                    command: "rerank",
                    args: config,
                },
            ));
            doc.rank_tables = tables.clone();
            write_text(out, &report_to_json(&doc)?)?;
        }
        None => {}
    }
    print_rank_tables(&tables);
    Ok(())
}

fn print_rank_tables(tables: &[RankTable]) {
    for (k, t) in tables.iter().enumerate() {
        if k > 0 {
            println!();
        }
        println!("[{}]", t.metric);
        let mut rows = vec![vec![
            "technique".to_string(),
            "rank".to_string(),
            "value".to_string(),
            "tied".to_string(),
        ]];
        for r in &t.rows {
            for (i, name) in t.techniques.iter().enumerate() {
                rows.push(vec![
                    name.clone(),
                    r.ranks[i].to_string(),
                    r.values[i].to_string(),
                    if r.tied[i] { "yes".into() } else { String::new() },
                ]);
            }
        }
        print_table(&rows);
    }
}
