//! Stress measures between high-dimensional and embedded distances.
//!
//! | measure | scale invariant |
//! |---|---|
//! | raw stress (RS) | no |
//! | normalized stress (NS) | no |
//! | Shepard goodness (SGS) | yes |
//! | non-metric stress (NMS) | yes |
//! | scale-normalized stress (SNS) | yes |
//!
//! All sums run over unordered pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_same_shape, CondensedDistances, ShepardPairs};
use crate::monotone::{isotonic_fit_unweighted, sort_for_isotonic, spearman_rho};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "rs")]
    RawStress,
    #[serde(rename = "ns")]
    NormalizedStress,
    #[serde(rename = "sgs")]
    ShepardGoodness,
    #[serde(rename = "nms")]
    NonMetricStress,
    #[serde(rename = "sns")]
    ScaleNormalizedStress,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::RawStress,
        MetricKind::NormalizedStress,
        MetricKind::ShepardGoodness,
        MetricKind::NonMetricStress,
        MetricKind::ScaleNormalizedStress,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            MetricKind::RawStress => "rs",
            MetricKind::NormalizedStress => "ns",
            MetricKind::ShepardGoodness => "sgs",
            MetricKind::NonMetricStress => "nms",
            MetricKind::ScaleNormalizedStress => "sns",
        }
    }

    pub fn is_scale_invariant(self) -> bool {
        !matches!(self, MetricKind::RawStress | MetricKind::NormalizedStress)
    }

    /// Shepard goodness is a correlation; every other measure is a stress.
    pub fn higher_is_better(self) -> bool {
        self == MetricKind::ShepardGoodness
    }

    /// Parses a comma-separated list such as `"ns,sns"`.
    pub fn parse_list(s: &str) -> Result<Vec<MetricKind>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rs" | "raw" | "raw-stress" => Ok(MetricKind::RawStress),
            "ns" | "normalized" | "normalized-stress" => Ok(MetricKind::NormalizedStress),
            "sgs" | "shepard" | "shepard-goodness" => Ok(MetricKind::ShepardGoodness),
            "nms" | "kruskal" | "non-metric-stress" => Ok(MetricKind::NonMetricStress),
            "sns" | "scale-normalized-stress" => Ok(MetricKind::ScaleNormalizedStress),
            other => Err(Error::InvalidRequest(format!("unknown metric '{other}'"))),
        }
    }
}

/// Evaluation options that change a metric's reported value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricOptions {
    /// Report `sqrt` of non-metric stress (classical Kruskal stress-1 form).
    pub kruskal_sqrt: bool,
}

pub fn raw_stress(d_high: &CondensedDistances, d_low: &CondensedDistances) -> Result<f64> {
    check_same_shape(d_high, d_low)?;
    Ok(d_high
        .as_slice()
        .iter()
        .zip(d_low.as_slice())
        .map(|(h, l)| (h - l) * (h - l))
        .sum())
}

/// `sqrt( sum (h - l)^2 / sum h^2 )`. Equals exactly 1 when every embedded distance is 0.
pub fn normalized_stress(d_high: &CondensedDistances, d_low: &CondensedDistances) -> Result<f64> {
    check_same_shape(d_high, d_low)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (h, l) in d_high.as_slice().iter().zip(d_low.as_slice()) {
        num += (h - l) * (h - l);
        den += h * h;
    }
    if den == 0.0 {
        return Err(Error::DegenerateHighSpace);
    }
    Ok((num / den).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalScale {
    pub alpha_star: f64,
    /// The unconstrained minimizer was not positive and was clamped to 0.
    pub clamped: bool,
}

/// Scale `alpha` minimizing `sum (h - alpha l)^2`, i.e. `sum(h l) / sum(l^2)`.
pub fn optimal_scale(d_high: &CondensedDistances, d_low: &CondensedDistances) -> Result<OptimalScale> {
    check_same_shape(d_high, d_low)?;
    let (mut cross, mut low_sq) = (0.0, 0.0);
    for (h, l) in d_high.as_slice().iter().zip(d_low.as_slice()) {
        cross += h * l;
        low_sq += l * l;
    }
    if low_sq == 0.0 {
        return Err(Error::DegenerateEmbedding);
    }
    if cross <= 0.0 {
        return Ok(OptimalScale {
            alpha_star: 0.0,
            clamped: true,
        });
    }
    Ok(OptimalScale {
        alpha_star: cross / low_sq,
        clamped: false,
    })
}

/// Normalized stress at the optimal scale. A fully collapsed embedding scores 1.
pub fn scale_normalized_stress(
    d_high: &CondensedDistances,
    d_low: &CondensedDistances,
) -> Result<f64> {
    check_same_shape(d_high, d_low)?;
    if d_high.is_all_zero() {
        return Err(Error::DegenerateHighSpace);
    }
    let alpha = match optimal_scale(d_high, d_low) {
        Ok(s) => s.alpha_star,
        Err(Error::DegenerateEmbedding) => return Ok(1.0),
        Err(e) => return Err(e),
    };
    // The minimum over alpha never exceeds the alpha = 0 value of 1; clamp rounding.
    Ok(normalized_stress(d_high, &d_low.scaled(alpha)?)?.min(1.0))
}

/// Spearman correlation of the Shepard diagram coordinates.
pub fn shepard_goodness(d_high: &CondensedDistances, d_low: &CondensedDistances) -> Result<f64> {
    check_same_shape(d_high, d_low)?;
    spearman_rho(d_high.as_slice(), d_low.as_slice())
}

/// Non-metric (Kruskal) stress: `sum (fit - l)^2 / sum l^2`, where `fit` is the
/// isotonic regression of the embedded distances in high-dimensional order.
pub fn non_metric_stress(
    d_high: &CondensedDistances,
    d_low: &CondensedDistances,
    opts: MetricOptions,
) -> Result<f64> {
    let pairs = ShepardPairs::new(d_high, d_low)?;
    let low_sq: f64 = d_low.as_slice().iter().map(|l| l * l).sum();
    if low_sq == 0.0 {
        return Err(Error::DegenerateEmbedding);
    }
    let seq = sort_for_isotonic(&pairs)?;
    let fit = isotonic_fit_unweighted(&seq)?;
    let v = fit.sse / low_sq;
    Ok(if opts.kruskal_sqrt { v.sqrt() } else { v })
}

pub fn evaluate(
    kind: MetricKind,
    d_high: &CondensedDistances,
    d_low: &CondensedDistances,
    opts: MetricOptions,
) -> Result<f64> {
    match kind {
        MetricKind::RawStress => raw_stress(d_high, d_low),
        MetricKind::NormalizedStress => normalized_stress(d_high, d_low),
        MetricKind::ShepardGoodness => shepard_goodness(d_high, d_low),
        MetricKind::NonMetricStress => non_metric_stress(d_high, d_low, opts),
        MetricKind::ScaleNormalizedStress => scale_normalized_stress(d_high, d_low),
    }
}

/// One point on a stress-scale curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub alpha: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaGrid {
    /// `samples` evenly spaced points on `[0, 2 alpha*]`, with `alpha*` itself inserted.
    AroundOptimum { samples: usize },
    Explicit(Vec<f64>),
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid::AroundOptimum { samples: 256 }
    }
}

/// Samples a scale-sensitive metric at `metric(d_high, alpha * d_low)` over a grid.
pub fn stress_scale_curve(
    d_high: &CondensedDistances,
    d_low: &CondensedDistances,
    metric: MetricKind,
    grid: &AlphaGrid,
) -> Result<Vec<CurveSample>> {
    if metric.is_scale_invariant() {
        return Err(Error::InvalidRequest(format!(
            "{metric} is scale invariant; its curve is constant"
        )));
    }
    check_same_shape(d_high, d_low)?;
    let alphas = match grid {
        AlphaGrid::Explicit(a) => {
            if a.len() < 2 {
                return Err(Error::InvalidRequest("alpha grid needs at least 2 points".into()));
            }
            if let Some(bad) = a.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::InvalidRequest(format!("invalid alpha {bad} in grid")));
            }
            a.clone()
        }
        AlphaGrid::AroundOptimum { samples } => {
            if *samples < 2 {
                return Err(Error::InvalidRequest("alpha grid needs at least 2 points".into()));
            }
            let star = match optimal_scale(d_high, d_low) {
                Ok(s) if s.alpha_star > 0.0 => Some(s.alpha_star),
                Ok(_) | Err(Error::DegenerateEmbedding) => None,
                Err(e) => return Err(e),
            };
            let hi = star.map_or(1.0, |s| 2.0 * s);
            let step = hi / (*samples - 1) as f64;
            let mut a: Vec<f64> = (0..*samples).map(|k| k as f64 * step).collect();
            if let Some(s) = star {
                let pos = a.partition_point(|&v| v < s);
                if a.get(pos) != Some(&s) {
                    a.insert(pos, s);
                }
            }
            a
        }
    };
    alphas
        .into_iter()
        .map(|alpha| {
            let value = evaluate(metric, d_high, &d_low.scaled(alpha)?, MetricOptions::default())?;
            Ok(CurveSample { alpha, value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(v: &[f64]) -> CondensedDistances {
        CondensedDistances::from_vec(v.to_vec()).unwrap()
    }

    #[test]
    fn raw_stress_examples() {
        assert_eq!(raw_stress(&cd(&[3.0, 4.0, 5.0]), &cd(&[3.0, 4.0, 5.0])).unwrap(), 0.0);
        assert_eq!(raw_stress(&cd(&[3.0, 4.0, 5.0]), &cd(&[2.0, 4.0, 5.0])).unwrap(), 1.0);
        let h = CondensedDistances::new(vec![1.0, 2.0, 0.0], 3).unwrap();
        let l = CondensedDistances::new(vec![2.0, 4.0, 0.0], 3).unwrap();
        assert_eq!(raw_stress(&h, &l).unwrap(), 5.0);
    }

    #[test]
    fn raw_stress_shape_mismatch() {
        assert!(matches!(
            raw_stress(&cd(&[1.0]), &cd(&[1.0, 2.0, 3.0])),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn normalized_stress_examples() {
        let h = cd(&[1.0, 2.0, 3.0]);
        assert_eq!(normalized_stress(&h, &cd(&[0.0, 0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(normalized_stress(&h, &h).unwrap(), 0.0);
        let h = cd(&[1.0, 2.0, 0.0]);
        let l = cd(&[2.0, 4.0, 0.0]);
        assert_eq!(normalized_stress(&h, &l).unwrap(), 1.0);
        assert!(matches!(
            normalized_stress(&cd(&[0.0; 3]), &h),
            Err(Error::DegenerateHighSpace)
        ));
    }

    #[test]
    fn optimal_scale_examples() {
        let h = cd(&[1.0, 2.0, 3.0]);
        let s = optimal_scale(&h, &h).unwrap();
        assert_eq!(s.alpha_star, 1.0);
        assert!(!s.clamped);
        let s = optimal_scale(&cd(&[1.0, 2.0, 0.0]), &cd(&[2.0, 4.0, 0.0])).unwrap();
        assert_eq!(s.alpha_star, 0.5);
        assert!(matches!(
            optimal_scale(&h, &cd(&[0.0; 3])),
            Err(Error::DegenerateEmbedding)
        ));
    }

    #[test]
    fn optimal_scale_clamps_when_uncorrelated() {
        // Disjoint supports: sum(h l) = 0 with a non-zero embedding.
        let s = optimal_scale(&cd(&[1.0, 0.0, 0.0]), &cd(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(s.alpha_star, 0.0);
        assert!(s.clamped);
    }

    #[test]
    fn sns_examples() {
        let h = cd(&[1.0, 2.0, 0.0]);
        assert_eq!(scale_normalized_stress(&h, &cd(&[2.0, 4.0, 0.0])).unwrap(), 0.0);
        assert_eq!(scale_normalized_stress(&h, &h).unwrap(), 0.0);
        assert_eq!(scale_normalized_stress(&h, &cd(&[0.0; 3])).unwrap(), 1.0);
        assert!(matches!(
            scale_normalized_stress(&cd(&[0.0; 3]), &h),
            Err(Error::DegenerateHighSpace)
        ));
    }

    #[test]
    fn shepard_examples() {
        let h = cd(&[1.0, 2.0, 3.0]);
        assert_eq!(shepard_goodness(&h, &cd(&[10.0, 20.0, 30.0])).unwrap(), 1.0);
        assert_eq!(shepard_goodness(&h, &cd(&[3.0, 2.0, 1.0])).unwrap(), -1.0);
        assert!(matches!(
            shepard_goodness(&h, &cd(&[2.0; 3])),
            Err(Error::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn nms_examples() {
        let o = MetricOptions::default();
        let h = cd(&[1.0, 2.0, 3.0]);
        assert_eq!(non_metric_stress(&h, &cd(&[0.5, 4.0, 9.0]), o).unwrap(), 0.0);
        let v = non_metric_stress(&h, &cd(&[3.0, 1.0, 2.0]), o).unwrap();
        assert!((v - 2.0 / 14.0).abs() < 1e-15, "{v}");
        let k = non_metric_stress(&h, &cd(&[3.0, 1.0, 2.0]), MetricOptions { kruskal_sqrt: true })
            .unwrap();
        assert!((k - (2.0f64 / 14.0).sqrt()).abs() < 1e-15);
        assert!(matches!(
            non_metric_stress(&h, &cd(&[0.0; 3]), o),
            Err(Error::DegenerateEmbedding)
        ));
    }

    #[test]
    fn nms_zero_with_tied_high_distances() {
        // Ties in the high-dimensional distances cost nothing under the secondary sort.
        let h = cd(&[1.0, 1.0, 2.0, 2.0, 2.0, 3.0]);
        let l = cd(&[0.9, 0.2, 5.0, 1.0, 3.0, 6.0]);
        assert_eq!(non_metric_stress(&h, &l, MetricOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn curve_refuses_invariant_metrics() {
        let h = cd(&[1.0, 2.0, 3.0]);
        for m in [
            MetricKind::ShepardGoodness,
            MetricKind::NonMetricStress,
            MetricKind::ScaleNormalizedStress,
        ] {
            assert!(matches!(
                stress_scale_curve(&h, &h, m, &AlphaGrid::default()),
                Err(Error::InvalidRequest(_))
            ));
        }
    }

    #[test]
    fn ns_curve_starts_at_one_and_contains_optimum() {
        let h = cd(&[1.0, 2.0, 3.0]);
        let l = cd(&[3.0, 1.5, 4.0]);
        let curve =
            stress_scale_curve(&h, &l, MetricKind::NormalizedStress, &AlphaGrid::default()).unwrap();
        assert_eq!(curve.len(), 257);
        assert_eq!(curve[0].alpha, 0.0);
        assert_eq!(curve[0].value, 1.0);
        let min = curve.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let sns = scale_normalized_stress(&h, &l).unwrap();
        assert!((min - sns).abs() < 1e-9);
        assert!(curve.windows(2).all(|w| w[0].alpha <= w[1].alpha));
    }

    #[test]
    fn metric_names_round_trip() {
        for m in MetricKind::ALL {
            assert_eq!(m.short_name().parse::<MetricKind>().unwrap(), m);
        }
        assert_eq!(
            MetricKind::parse_list("ns, sns").unwrap(),
            vec![MetricKind::NormalizedStress, MetricKind::ScaleNormalizedStress]
        );
        assert!("foo".parse::<MetricKind>().is_err());
    }
}
