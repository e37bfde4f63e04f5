//! Static SVG 1.1 plots on a fixed 800x600 canvas.

use std::fmt::Write as _;
use std::path::Path;

use super::report::write_text;
use crate::error::{Error, Result};
use crate::metrics::CurveSample;
use crate::model::ShepardPairs;
use crate::monotone::{sort_pairs_for_isotonic, IsotonicFit};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;
/// Scatter plots keep at most this many points (evenly strided).
pub const MAX_SCATTER_POINTS: usize = 20_000;

/// Maps data coordinates to canvas pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Frame {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let widen = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        let (x_min, x_max) = widen(x_min, x_max);
        let (y_min, y_max) = widen(y_min, y_max);
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    pub fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn open(svg: &mut String, title: &str) {
    let _ = write!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <title>{}</title>\n\
         <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n",
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(svg: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\"/>\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\"/>"
    );
    for t in ticks(f.x_min, f.x_max) {
        let x = f.x(t);
        let _ = writeln!(svg, "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>", y0 + 5.0);
    }
    for t in ticks(f.y_min, f.y_max) {
        let y = f.y(t);
        let _ = writeln!(svg, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\"/>", x0 - 5.0);
    }
    svg.push_str("</g>\n<g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"12\">\n");
    for t in ticks(f.x_min, f.x_max) {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            f.x(t),
            y0 + 20.0,
            fmt_tick(t)
        );
    }
    for t in ticks(f.y_min, f.y_max) {
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            x0 - 8.0,
            f.y(t) + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        "</g>\n<text class=\"x-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n\
         <text class=\"y-label\" x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 20.0,
        escape(x_label),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

/// Renders a stress-scale curve with its minimum marked.
pub fn render_stress_scale_curve(samples: &[CurveSample], minimum: (f64, f64), metric_label: &str) -> Result<String> {
    if samples.len() < 2 {
        return Err(Error::InvalidRequest("a curve needs at least 2 samples".into()));
    }
    let frame = curve_frame(samples, minimum);

    let mut svg = String::new();
    open(&mut svg, &format!("{metric_label} versus scale"));
    axes(&mut svg, &frame, "scale factor \u{3b1}", metric_label);
    svg.push_str("<polyline class=\"curve\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"");
    for (k, s) in samples.iter().enumerate() {
        if k > 0 {
            svg.push(' ');
        }
        let _ = write!(svg, "{:.3},{:.3}", frame.x(s.alpha), frame.y(s.value));
    }
    svg.push_str("\"/>\n");
    let (mx, my) = (frame.x(minimum.0), frame.y(minimum.1));
    let _ = writeln!(
        svg,
        "<circle class=\"minimum\" cx=\"{mx:.3}\" cy=\"{my:.3}\" r=\"5\" fill=\"crimson\" data-alpha=\"{}\" data-value=\"{}\"/>\n\
         <text class=\"minimum-label\" x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\">\u{3b1}* = {}, min = {}</text>",
        minimum.0,
        minimum.1,
        mx + 8.0,
        my - 8.0,
        fmt_tick(minimum.0),
        fmt_tick(minimum.1)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// The frame [`render_stress_scale_curve`] uses for these inputs.
pub fn curve_frame(samples: &[CurveSample], minimum: (f64, f64)) -> Frame {
    let x_lo = samples.iter().map(|s| s.alpha).fold(minimum.0, f64::min).min(0.0);
    let x_hi = samples.iter().map(|s| s.alpha).fold(minimum.0, f64::max);
    let y_hi = samples.iter().map(|s| s.value).fold(minimum.1, f64::max);
    Frame::new(x_lo, x_hi, 0.0, y_hi)
}

pub fn plot_stress_scale_curve(
    samples: &[CurveSample],
    minimum: (f64, f64),
    metric_label: &str,
    path: &Path,
) -> Result<()> {
    write_text(path, &render_stress_scale_curve(samples, minimum, metric_label)?)
}

/// Renders a Shepard diagram with the monotone fit drawn as a step line in fitting order.
pub fn render_shepard(pairs: &ShepardPairs, fit: &IsotonicFit) -> Result<String> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if fit.fitted.len() != pairs.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} fitted values for {} pairs",
            fit.fitted.len(),
            pairs.len()
        )));
    }
    let sorted = sort_pairs_for_isotonic(pairs)?;
    let x_hi = sorted.iter().map(|p| p.0).fold(0.0, f64::max);
    let y_hi = sorted
        .iter()
        .map(|p| p.1)
        .chain(fit.fitted.iter().copied())
        .fold(0.0, f64::max);
    let frame = Frame::new(0.0, x_hi, 0.0, y_hi);

    let mut svg = String::new();
    open(&mut svg, "Shepard diagram");
    axes(&mut svg, &frame, "high-dimensional distance", "embedded distance");
    svg.push_str("<g class=\"pairs\" fill=\"gray\" fill-opacity=\"0.5\">\n");
    let stride = sorted.len().div_ceil(MAX_SCATTER_POINTS).max(1);
    for &(h, l) in sorted.iter().step_by(stride) {
        let _ = writeln!(svg, "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\"/>", frame.x(h), frame.y(l));
    }
    svg.push_str("</g>\n<path class=\"fit\" fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" d=\"");
    let _ = write!(svg, "M {:.3} {:.3}", frame.x(sorted[0].0), frame.y(fit.fitted[0]));
    for (pair, f) in sorted[1..].iter().zip(fit.fitted.windows(2)) {
        if f[1] != f[0] {
            let _ = write!(svg, " H {:.3} V {:.3}", frame.x(pair.0), frame.y(f[1]));
        }
    }
    let _ = write!(svg, " H {:.3}", frame.x(sorted[sorted.len() - 1].0));
    svg.push_str("\"/>\n</svg>\n");
    Ok(svg)
}

pub fn plot_shepard(pairs: &ShepardPairs, fit: &IsotonicFit, path: &Path) -> Result<()> {
    write_text(path, &render_shepard(pairs, fit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::{isotonic_fit_unweighted, sort_for_isotonic};

    fn attr(svg: &str, tag_class: &str, name: &str) -> f64 {
        let start = svg.find(tag_class).unwrap();
        let rest = &svg[start..];
        let key = format!("{name}=\"");
        let i = rest.find(&key).unwrap() + key.len();
        let j = rest[i..].find('"').unwrap();
        rest[i..i + j].parse().unwrap()
    }

    fn samples() -> Vec<CurveSample> {
        (0..11)
            .map(|k| {
                let a = k as f64 * 0.2;
                CurveSample { alpha: a, value: (1.0 - a).abs() + 0.3 }
            })
            .collect()
    }

    #[test]
    fn curve_marker_lands_on_minimum() {
        let s = samples();
        let svg = render_stress_scale_curve(&s, (1.0, 0.3), "NS").unwrap();
        let f = curve_frame(&s, (1.0, 0.3));
        assert!((attr(&svg, "class=\"minimum\"", "cx") - f.x(1.0)).abs() < 1.0);
        assert!((attr(&svg, "class=\"minimum\"", "cy") - f.y(0.3)).abs() < 1.0);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
    }

    #[test]
    fn two_sample_curve_is_a_segment() {
        let s = vec![CurveSample { alpha: 0.0, value: 1.0 }, CurveSample { alpha: 1.0, value: 0.5 }];
        let svg = render_stress_scale_curve(&s, (1.0, 0.5), "NS").unwrap();
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(pts.split(' ').count(), 2);
        assert!(render_stress_scale_curve(&s[..1], (1.0, 0.5), "NS").is_err());
    }

    #[test]
    fn curve_rendering_is_deterministic() {
        let s = samples();
        assert_eq!(
            render_stress_scale_curve(&s, (1.0, 0.3), "NS").unwrap(),
            render_stress_scale_curve(&s, (1.0, 0.3), "NS").unwrap()
        );
    }

    fn path_points(svg: &str) -> Vec<(f64, f64)> {
        let d = svg.split("class=\"fit\"").nth(1).unwrap();
        let d = d.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
        let toks: Vec<&str> = d.split_whitespace().collect();
        let (mut x, mut y) = (0.0, 0.0);
        let mut out = Vec::new();
        let mut k = 0;
        while k < toks.len() {
            match toks[k] {
                "M" => {
                    x = toks[k + 1].parse().unwrap();
                    y = toks[k + 2].parse().unwrap();
                    k += 3;
                }
                "H" => {
                    x = toks[k + 1].parse().unwrap();
                    k += 2;
                }
                "V" => {
                    y = toks[k + 1].parse().unwrap();
                    k += 2;
                }
                t => panic!("unexpected token {t}"),
            }
            out.push((x, y));
        }
        out
    }

    #[test]
    fn shepard_fit_is_monotone_for_scrambled_pairs() {
        let mut rng = crate::rng::Rng::new(12);
        let raw: Vec<(f64, f64)> = (0..60).map(|_| (rng.uniform(), rng.uniform())).collect();
        let pairs = ShepardPairs::from_pairs(raw).unwrap();
        let fit = isotonic_fit_unweighted(&sort_for_isotonic(&pairs).unwrap()).unwrap();
        let svg = render_shepard(&pairs, &fit).unwrap();
        let pts = path_points(&svg);
        // Canvas y grows downward, so a non-decreasing fit has non-increasing y.
        assert!(pts.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9 && w[1].0 >= w[0].0 - 1e-9));
    }

    #[test]
    fn monotone_pairs_fit_passes_through_points() {
        let pairs = ShepardPairs::from_pairs(vec![(1.0, 1.0), (2.0, 3.0), (3.0, 4.0)]).unwrap();
        let fit = isotonic_fit_unweighted(&sort_for_isotonic(&pairs).unwrap()).unwrap();
        let svg = render_shepard(&pairs, &fit).unwrap();
        let pts = path_points(&svg);
        let circles: Vec<(f64, f64)> = svg
            .split("<circle ")
            .skip(1)
            .map(|c| (attr(c, "cx", "cx"), attr(c, "cy", "cy")))
            .collect();
        for c in circles {
            assert!(pts.iter().any(|p| (p.0 - c.0).abs() < 1e-3 && (p.1 - c.1).abs() < 1e-3));
        }
    }

    #[test]
    fn single_pair() {
        let pairs = ShepardPairs::from_pairs(vec![(1.0, 2.0)]).unwrap();
        let fit = isotonic_fit_unweighted(&[2.0]).unwrap();
        let svg = render_shepard(&pairs, &fit).unwrap();
        assert_eq!(svg.matches("<circle ").count(), 1);
        assert_eq!(path_points(&svg).len(), 2);
        let bad = isotonic_fit_unweighted(&[2.0, 3.0]).unwrap();
        assert!(render_shepard(&pairs, &bad).is_err());
    }
}
