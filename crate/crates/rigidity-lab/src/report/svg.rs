//! Diagnostic SVG figures, assembled as strings: an eigenvalue scatter with
//! the predicted-lattice overlay and annulus circles, and log-scale tail
//! curves comparing empirical frequencies against bounds. Not publication
//! graphics.

use num_complex::Complex64;

use crate::geometry::{predicted_lattice, radius};
use crate::haar::SpectrumSample;

const W: f64 = 640.0;
const H: f64 = 640.0;

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

/// Scatter of one trial's spectrum (class `pt`, one circle per eigenvalue),
/// the predicted lattice (class `lattice`, drawn as crosses), and the
/// annulus circles at radii `r_1 .. r_⌈√m⌉` (class `ring`).
pub fn scatter_svg(sample: &SpectrumSample) -> String {
    let params = sample.params;
    let rings = (params.m() as f64).sqrt().ceil() as usize;
    let scale_factor = if params.rescaled() { params.scale() } else { 1.0 };

    let extent = sample
        .values
        .iter()
        .map(|z| z.norm())
        .fold(radius(rings, &params) * scale_factor, f64::max)
        * 1.08
        + 1e-12;
    let px = |z: Complex64| -> (f64, f64) {
        ((z.re / extent + 1.0) * 0.5 * W, (1.0 - z.im / extent) * 0.5 * H)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for i in 1..=rings {
        let r = radius(i, &params) * scale_factor / extent * 0.5 * W;
        out.push_str(&format!(
            "<circle class=\"ring\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" \
             stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
            fmt(W / 2.0),
            fmt(H / 2.0),
            fmt(r)
        ));
    }

    let lattice = predicted_lattice(&params);
    for z in &lattice.points {
        let (x, y) = px(z * scale_factor);
        out.push_str(&format!(
            "<path class=\"lattice\" d=\"M {} {} L {} {} M {} {} L {} {}\" \
             stroke=\"#cc3333\" stroke-width=\"1.2\"/>\n",
            fmt(x - 3.0),
            fmt(y),
            fmt(x + 3.0),
            fmt(y),
            fmt(x),
            fmt(y - 3.0),
            fmt(x),
            fmt(y + 3.0)
        ));
    }

    for z in &sample.values {
        let (x, y) = px(*z);
        out.push_str(&format!(
            "<circle class=\"pt\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#225588\" \
             fill-opacity=\"0.85\"/>\n",
            fmt(x),
            fmt(y)
        ));
    }

    out.push_str(&format!(
        "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"12\">n={} m={} seed={} \
         trial={} ({} coords); crosses: predicted locations; circles: annulus radii</text>\n",
        params.n(),
        params.m(),
        sample.seed,
        sample.trial_index,
        if params.rescaled() { "rescaled" } else { "raw" }
    ));
    out.push_str("</svg>\n");
    out
}

/// One named series of (x, y) points for the tail plot.
pub struct TailSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

/// Log-scale tail curves. Zero (or sub-floor) frequencies are clamped to the
/// `1/(2·trials)` floor, which the caption states.
pub fn tail_curves_svg(title: &str, x_label: &str, series: &[TailSeries], trials: usize) -> String {
    let floor = 1.0 / (2.0 * trials.max(1) as f64);
    let clamp = |y: f64| -> f64 {
        if !y.is_finite() {
            return floor;
        }
        y.max(floor)
    };

    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let (x_min, x_max) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let x_span = (x_max - x_min).max(1e-12);
    let y_top = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| clamp(p.1)))
        .fold(floor, f64::max)
        .max(1.0);
    let (ly_min, ly_max) = (floor.log10(), y_top.log10() + 0.1);
    let margin = 48.0;

    let px = |x: f64, y: f64| -> (f64, f64) {
        let fx = (x - x_min) / x_span;
        let fy = (clamp(y).log10() - ly_min) / (ly_max - ly_min);
        (margin + fx * (W - 2.0 * margin), H - margin - fy * (H - 2.0 * margin))
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" \
         y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = margin,
        b = H - margin,
        r = W - margin,
        t = margin
    ));

    for s in series {
        if s.points.is_empty() {
            continue;
        }
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| {
                let (px_, py_) = px(x, y);
                format!("{},{}", fmt(px_), fmt(py_))
            })
            .collect();
        out.push_str(&format!(
            "<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" \
             points=\"{}\"/>\n",
            s.color,
            pts.join(" ")
        ));
    }

    let legend: Vec<String> = series.iter().map(|s| s.label.clone()).collect();
    out.push_str(&format!(
        "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"12\">{title} \
         [{}] x: {x_label}, y: log10 frequency; zero frequencies clamped to the 1/(2T) floor = \
         {floor:.3e}</text>\n",
        legend.join(" vs ")
    ));
    out.push_str("</svg>\n");
    out
}
