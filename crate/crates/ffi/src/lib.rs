//! C ABI over the stress-gauge metrics and embedders.
//!
//! Every fallible call returns an [`SgStatus`]; on failure a message for the
//! calling thread is available from [`sg_last_error_message`]. Handles are
//! opaque, owned by the caller, and released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stress_gauge::embed::{self, EmbedderConfig, SmacofInit, Technique};
use stress_gauge::metrics::{self, MetricOptions};
use stress_gauge::model::{pairwise_distances, CondensedDistances, DataMatrix, DistanceMetric, EmbeddingMatrix};
use stress_gauge::monotone;
use stress_gauge::{Error, ErrorClass, MetricKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    /// Bad argument value or unsupported request.
    InvalidArgument = 1,
    /// Malformed or mismatched input data.
    DataError = 2,
    /// Degenerate input or optimizer failure.
    NumericalError = 3,
    NullPointer = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgMetric {
    RawStress = 0,
    NormalizedStress = 1,
    ShepardGoodness = 2,
    NonMetricStress = 3,
    ScaleNormalizedStress = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgDistance {
    Euclidean = 0,
    Manhattan = 1,
    Cosine = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgTechnique {
    ClassicalMds = 0,
    SmacofMds = 1,
    Tsne = 2,
    Random = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgEmbedConfig {
    pub technique: SgTechnique,
    pub seed: u64,
    pub target_dim: usize,
    pub tsne_perplexity: f64,
    pub tsne_iters: usize,
    pub smacof_max_iters: usize,
    pub smacof_rel_tol: f64,
    /// Start SMACOF from a random layout instead of classical MDS.
    pub smacof_random_init: bool,
    pub distance: SgDistance,
}

/// Opaque condensed distance vector.
pub struct SgDistances(CondensedDistances);

/// Opaque row-major embedding.
pub struct SgEmbedding(EmbeddingMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> SgStatus {
    let status = match e.class() {
        ErrorClass::Usage => SgStatus::InvalidArgument,
        ErrorClass::Data => SgStatus::DataError,
        ErrorClass::Numerical => SgStatus::NumericalError,
    };
    set_error(e.to_string());
    status
}

fn null_arg(name: &str) -> SgStatus {
    set_error(format!("null pointer passed for '{name}'"));
    SgStatus::NullPointer
}

fn guard(f: impl FnOnce() -> SgStatus) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == SgStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            SgStatus::Internal
        }
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> &'a [f64] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, len)
    }
}

fn metric_kind(m: SgMetric) -> MetricKind {
    match m {
        SgMetric::RawStress => MetricKind::RawStress,
        SgMetric::NormalizedStress => MetricKind::NormalizedStress,
        SgMetric::ShepardGoodness => MetricKind::ShepardGoodness,
        SgMetric::NonMetricStress => MetricKind::NonMetricStress,
        SgMetric::ScaleNormalizedStress => MetricKind::ScaleNormalizedStress,
    }
}

fn distance_metric(d: SgDistance) -> DistanceMetric {
    match d {
        SgDistance::Euclidean => DistanceMetric::Euclidean,
        SgDistance::Manhattan => DistanceMetric::Manhattan,
        SgDistance::Cosine => DistanceMetric::Cosine,
    }
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Pairwise distances of `rows × cols` row-major points.
///
/// # Safety
/// `values` must point to `rows * cols` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_from_points(
    values: *const f64,
    rows: usize,
    cols: usize,
    distance: SgDistance,
    out: *mut *mut SgDistances,
) -> SgStatus {
    guard(|| {
        if values.is_null() {
            return null_arg("values");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(Error::InvalidRequest("rows * cols overflows".into()));
        };
        let data = match DataMatrix::new(slice(values, len).to_vec(), rows, cols) {
            Ok(d) => d,
            Err(e) => return fail(e),
        };
        match pairwise_distances(&data, distance_metric(distance)) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SgDistances(d)));
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Wraps an existing condensed vector (pairs `i < j` in row order).
///
/// # Safety
/// `values` must point to `len` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_from_condensed(
    values: *const f64,
    len: usize,
    out: *mut *mut SgDistances,
) -> SgStatus {
    guard(|| {
        if values.is_null() {
            return null_arg("values");
        }
        if out.is_null() {
            return null_arg("out");
        }
        match CondensedDistances::from_vec(slice(values, len).to_vec()) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SgDistances(d)));
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of pairs; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_len(d: *const SgDistances) -> usize {
    d.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_n_points(d: *const SgDistances) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_points())
}

/// Copies the condensed values into `out`, which must hold exactly `len` doubles.
///
/// # Safety
/// `d` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_copy(d: *const SgDistances, out: *mut f64, len: usize) -> SgStatus {
    guard(|| {
        let Some(d) = d.as_ref() else { return null_arg("distances") };
        if out.is_null() {
            return null_arg("out");
        }
        if len != d.0.len() {
            return fail(Error::ShapeMismatch(format!("buffer holds {len}, need {}", d.0.len())));
        }
        ptr::copy_nonoverlapping(d.0.as_slice().as_ptr(), out, len);
        SgStatus::Ok
    })
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_distances_free(d: *mut SgDistances) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Evaluates one quality metric of `low` against `high`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_metric(
    metric: SgMetric,
    high: *const SgDistances,
    low: *const SgDistances,
    kruskal_sqrt: bool,
    out: *mut f64,
) -> SgStatus {
    guard(|| {
        let Some(h) = high.as_ref() else { return null_arg("high") };
        let Some(l) = low.as_ref() else { return null_arg("low") };
        if out.is_null() {
            return null_arg("out");
        }
        match metrics::evaluate(metric_kind(metric), &h.0, &l.0, MetricOptions { kruskal_sqrt }) {
            Ok(v) => {
                *out = v;
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Closed-form optimal scale. `clamped` (nullable) reports a non-positive minimizer.
///
/// # Safety
/// Handles must be live, `alpha` writable, `clamped` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sg_optimal_scale(
    high: *const SgDistances,
    low: *const SgDistances,
    alpha: *mut f64,
    clamped: *mut bool,
) -> SgStatus {
    guard(|| {
        let Some(h) = high.as_ref() else { return null_arg("high") };
        let Some(l) = low.as_ref() else { return null_arg("low") };
        if alpha.is_null() {
            return null_arg("alpha");
        }
        match metrics::optimal_scale(&h.0, &l.0) {
            Ok(s) => {
                *alpha = s.alpha_star;
                if !clamped.is_null() {
                    *clamped = s.clamped;
                }
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Evaluates a scale-sensitive metric at each of `n` scale factors.
///
/// # Safety
/// Handles must be live; `alphas` and `values` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_stress_scale_curve(
    metric: SgMetric,
    high: *const SgDistances,
    low: *const SgDistances,
    alphas: *const f64,
    n: usize,
    values: *mut f64,
) -> SgStatus {
    guard(|| {
        let Some(h) = high.as_ref() else { return null_arg("high") };
        let Some(l) = low.as_ref() else { return null_arg("low") };
        if alphas.is_null() {
            return null_arg("alphas");
        }
        if values.is_null() {
            return null_arg("values");
        }
        let grid = metrics::AlphaGrid::Explicit(slice(alphas, n).to_vec());
        match metrics::stress_scale_curve(&h.0, &l.0, metric_kind(metric), &grid) {
            Ok(samples) => {
                for (k, s) in samples.iter().enumerate() {
                    *values.add(k) = s.value;
                }
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Weighted isotonic (non-decreasing) regression. `weights` may be null for unit weights.
///
/// # Safety
/// `y` and `fitted` must hold `n` doubles, `weights` null or `n` doubles, `sse` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sg_isotonic_fit(
    y: *const f64,
    weights: *const f64,
    n: usize,
    fitted: *mut f64,
    sse: *mut f64,
) -> SgStatus {
    guard(|| {
        if y.is_null() {
            return null_arg("y");
        }
        if fitted.is_null() {
            return null_arg("fitted");
        }
        let ys = slice(y, n);
        let fit = if weights.is_null() {
            monotone::isotonic_fit_unweighted(ys)
        } else {
            monotone::isotonic_fit(ys, slice(weights, n))
        };
        match fit {
            Ok(f) => {
                ptr::copy_nonoverlapping(f.fitted.as_ptr(), fitted, n);
                if !sse.is_null() {
                    *sse = f.sse;
                }
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Spearman rank correlation with average ranks for ties.
///
/// # Safety
/// `x` and `y` must hold `n` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spearman(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> SgStatus {
    guard(|| {
        if x.is_null() {
            return null_arg("x");
        }
        if y.is_null() {
            return null_arg("y");
        }
        if out.is_null() {
            return null_arg("out");
        }
        match monotone::spearman_rho(slice(x, n), slice(y, n)) {
            Ok(v) => {
                *out = v;
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Default embedder settings for `technique`.
#[no_mangle]
pub extern "C" fn sg_embed_config_default(technique: SgTechnique) -> SgEmbedConfig {
    let d = EmbedderConfig::default();
    SgEmbedConfig {
        technique,
        seed: d.seed,
        target_dim: d.target_dim,
        tsne_perplexity: d.tsne_perplexity,
        tsne_iters: d.tsne_iters,
        smacof_max_iters: d.smacof_max_iters,
        smacof_rel_tol: d.smacof_rel_tol,
        smacof_random_init: false,
        distance: SgDistance::Euclidean,
    }
}

/// Embeds `rows × cols` row-major points.
///
/// # Safety
/// `values` must hold `rows * cols` doubles, `config` be readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_embed(
    values: *const f64,
    rows: usize,
    cols: usize,
    config: *const SgEmbedConfig,
    out: *mut *mut SgEmbedding,
) -> SgStatus {
    guard(|| {
        if values.is_null() {
            return null_arg("values");
        }
        let Some(c) = config.as_ref() else { return null_arg("config") };
        if out.is_null() {
            return null_arg("out");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(Error::InvalidRequest("rows * cols overflows".into()));
        };
        let data = match DataMatrix::new(slice(values, len).to_vec(), rows, cols) {
            Ok(d) => d,
            Err(e) => return fail(e),
        };
        let cfg = EmbedderConfig {
            technique: match c.technique {
                SgTechnique::ClassicalMds => Technique::ClassicalMds,
                SgTechnique::SmacofMds => Technique::SmacofMds,
                SgTechnique::Tsne => Technique::Tsne,
                SgTechnique::Random => Technique::Random,
            },
            seed: c.seed,
            target_dim: c.target_dim,
            tsne_perplexity: c.tsne_perplexity,
            tsne_iters: c.tsne_iters,
            smacof_max_iters: c.smacof_max_iters,
            smacof_rel_tol: c.smacof_rel_tol,
            smacof_init: if c.smacof_random_init {
                SmacofInit::Random
            } else {
                SmacofInit::ClassicalMds
            },
        };
        match embed::embed(&data, distance_metric(c.distance), &cfg) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(SgEmbedding(r.embedding)));
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Wraps caller-provided embedding coordinates.
///
/// # Safety
/// `values` must hold `rows * cols` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_from_points(
    values: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut SgEmbedding,
) -> SgStatus {
    guard(|| {
        if values.is_null() {
            return null_arg("values");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(Error::InvalidRequest("rows * cols overflows".into()));
        };
        match EmbeddingMatrix::new(slice(values, len).to_vec(), rows, cols) {
            Ok(e) => {
                *out = Box::into_raw(Box::new(SgEmbedding(e)));
                SgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_rows(e: *const SgEmbedding) -> usize {
    e.as_ref().map_or(0, |e| e.0.rows())
}

/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_cols(e: *const SgEmbedding) -> usize {
    e.as_ref().map_or(0, |e| e.0.cols())
}

/// Copies row-major coordinates into `out`, which must hold exactly `rows * cols` doubles.
///
/// # Safety
/// `e` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_copy(e: *const SgEmbedding, out: *mut f64, len: usize) -> SgStatus {
    guard(|| {
        let Some(e) = e.as_ref() else { return null_arg("embedding") };
        if out.is_null() {
            return null_arg("out");
        }
        let src = e.0.points().as_slice();
        if len != src.len() {
            return fail(Error::ShapeMismatch(format!("buffer holds {len}, need {}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, len);
        SgStatus::Ok
    })
}

/// Pairwise distances between embedded points.
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_distances(
    e: *const SgEmbedding,
    distance: SgDistance,
    out: *mut *mut SgDistances,
) -> SgStatus {
    guard(|| {
        let Some(e) = e.as_ref() else { return null_arg("embedding") };
        if out.is_null() {
            return null_arg("out");
        }
        match pairwise_distances(&e.0, distance_metric(distance)) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SgDistances(d)));
                SgStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// # Safety
/// `e` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_embedding_free(e: *mut SgEmbedding) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}
