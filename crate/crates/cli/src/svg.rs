//! Hand-rolled SVG line plot of an orbit: |c_n| and the running density
//! D(n) against n. Long series are downsampled by max-pooling |c_n| so
//! isolated spikes (the 3-adic Cantor peaks, shift offsets) stay visible,
//! while D(n) — a slowly varying running fraction — is strided.

use std::fmt::Write as _;

use opstab_core::stability::{CorrelationSeries, DensityProfile};

const WIDTH: u32 = 860;
const HEIGHT: u32 = 420;
const PLOT_LEFT: f64 = 60.0;
const PLOT_RIGHT: f64 = 840.0;
const PLOT_TOP: f64 = 40.0;
const PLOT_BOTTOM: f64 = 370.0;
const MAX_BUCKETS: u64 = 1600;

const ABS_COLOR: &str = "#1f77b4";
const DENSITY_COLOR: &str = "#ff7f0e";
const GRID_COLOR: &str = "#e0e0e0";

pub fn orbit_plot(series: &CorrelationSeries, profile: &DensityProfile, title: &str) -> String {
    let n_max = series.n_max().max(1);
    let max_abs = (1..=n_max)
        .filter_map(|n| series.value(n))
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let y_max = ((max_abs / 0.25).ceil() * 0.25).max(1.0);

    let x_of = |n: u64| PLOT_LEFT + (n as f64 / n_max as f64) * (PLOT_RIGHT - PLOT_LEFT);
    let y_of = |v: f64| PLOT_BOTTOM - (v / y_max) * (PLOT_BOTTOM - PLOT_TOP);

    let mut abs_points = Vec::new();
    let mut density_points = Vec::new();
    let buckets = n_max.min(MAX_BUCKETS);
    for b in 0..buckets {
        let lo = 1 + b * n_max / buckets;
        let hi = (b + 1) * n_max / buckets;
        if lo > hi {
            continue;
        }
        // place the bucket's |c| point at the argmax so spikes land where
        // they occur, not at a bucket edge
        let (mut best_n, mut best_v) = (lo, 0.0f64);
        for n in lo..=hi {
            let v = series.value(n).map_or(0.0, |c| c.norm());
            if v > best_v {
                best_v = v;
                best_n = n;
            }
        }
        abs_points.push((x_of(best_n), y_of(best_v)));
        if let Some(d) = profile.density(hi) {
            density_points.push((x_of(hi), y_of(d)));
        }
    }

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    let _ = write!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n");
    let _ = write!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">{}</text>\n",
        (PLOT_LEFT + PLOT_RIGHT) / 2.0,
        escape(title)
    );

    // horizontal grid and y labels every 0.25
    let mut tick = 0.0;
    while tick <= y_max + 1e-9 {
        let y = y_of(tick);
        let _ = write!(
            svg,
            "<line x1=\"{PLOT_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{PLOT_RIGHT:.2}\" y2=\"{y:.2}\" \
             stroke=\"{GRID_COLOR}\"/>\n"
        );
        let _ = write!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{tick:.2}</text>\n",
            PLOT_LEFT - 8.0,
            y + 4.0
        );
        tick += 0.25;
    }

    // x labels at the quarters
    for q in 0..=4u64 {
        let n = (q * n_max) / 4;
        let x = x_of(n.max(1).min(n_max));
        let _ = write!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            PLOT_BOTTOM + 18.0,
            n.max(1)
        );
    }
    let _ = write!(
        svg,
        "<rect x=\"{PLOT_LEFT:.2}\" y=\"{PLOT_TOP:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
         fill=\"none\" stroke=\"black\"/>\n",
        PLOT_RIGHT - PLOT_LEFT,
        PLOT_BOTTOM - PLOT_TOP
    );

    let _ = write!(svg, "{}", polyline(&abs_points, ABS_COLOR));
    let _ = write!(svg, "{}", polyline(&density_points, DENSITY_COLOR));

    // legend, top right inside the frame
    let lx = PLOT_RIGHT - 180.0;
    let _ = write!(
        svg,
        "<line x1=\"{lx:.2}\" y1=\"52.00\" x2=\"{:.2}\" y2=\"52.00\" stroke=\"{ABS_COLOR}\" \
         stroke-width=\"2\"/>\n<text x=\"{:.2}\" y=\"56.00\" font-family=\"sans-serif\" \
         font-size=\"12\">|c_n|</text>\n",
        lx + 28.0,
        lx + 36.0
    );
    let _ = write!(
        svg,
        "<line x1=\"{lx:.2}\" y1=\"70.00\" x2=\"{:.2}\" y2=\"70.00\" \
         stroke=\"{DENSITY_COLOR}\" stroke-width=\"2\"/>\n<text x=\"{:.2}\" y=\"74.00\" \
         font-family=\"sans-serif\" font-size=\"12\">D(n) at eps = {:?}</text>\n",
        lx + 28.0,
        lx + 36.0,
        profile.eps()
    );

    svg.push_str("</svg>\n");
    svg
}

fn polyline(points: &[(f64, f64)], color: &str) -> String {
    if points.is_empty() {
        return String::new();
    }
    let mut s = String::from("<polyline fill=\"none\" stroke=\"");
    s.push_str(color);
    s.push_str("\" stroke-width=\"1.5\" points=\"");
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    s.push_str("\"/>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
