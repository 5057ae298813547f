//! Self-contained SVG line chart of bound curves.

use std::fmt::Write as _;

use crate::rip_bounds::{CurveRow, PRESENTATION_CLIP};

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 600.0;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const KINDS: [(&str, &str); 3] = [
    ("lower", "#1f77b4"),
    ("upper_new", "#d62728"),
    ("upper_classical", "#2ca02c"),
];
const DASHES: [&str; 4] = ["", "8 4", "2 3", "10 3 2 3"];

fn kind_value(row: &CurveRow, kind: usize) -> Option<f64> {
    match kind {
        // Vacuous lower bounds are drawn at zero.
        0 => row.lower_bound.map(|v| v.max(0.0)),
        1 => row.upper_new,
        _ => row.upper_classical,
    }
}

/// One polyline per (sparsity level, bound kind), y clipped at 2.
///
/// `levels` pairs each sparsity level with its rows. A kind without any
/// defined value still gets an (empty) polyline, so the element count is
/// always `3 * levels.len()`.
pub fn render_curve_svg(title: &str, levels: &[(f64, Vec<CurveRow>)]) -> String {
    let rates = levels.iter().flat_map(|(_, rows)| rows.iter().map(|r| r.compression_rate));
    let (mut x_min, mut x_max) = rates.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    if !x_min.is_finite() {
        (x_min, x_max) = (1.0, 2.0);
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let (y_min, y_max) = (0.0, PRESENTATION_CLIP);

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_TOP + (1.0 - (y.clamp(y_min, y_max) - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    );

    // Axes and ticks.
    let (x0, y0, x1, y1) = (px(x_min), py(y_min), px(x_max), py(y_max));
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/></g>"#
    );
    let _ = writeln!(svg, r#"<g font-family="sans-serif" font-size="12">"#);
    for i in 0..=5 {
        let x = x_min + (x_max - x_min) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.2}</text>"#,
            px(x),
            y0,
            y0 + 5.0,
            y0 + 20.0,
            x
        );
    }
    for i in 0..=4 {
        let y = y_min + (y_max - y_min) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5:.1}</text>"#,
            x0 - 5.0,
            py(y),
            x0,
            x0 - 8.0,
            py(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">compression rate N/n</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">RIP constant bound</text>"#,
        MARGIN_TOP + plot_h / 2.0
    );
    let _ = writeln!(svg, "</g>");

    // Curves.
    for (li, (level, rows)) in levels.iter().enumerate() {
        let dash = DASHES[li % DASHES.len()];
        for (ki, (kind, color)) in KINDS.iter().enumerate() {
            let points: Vec<String> = rows
                .iter()
                .filter_map(|r| kind_value(r, ki).map(|v| format!("{:.2},{:.2}", px(r.compression_rate), py(v))))
                .collect();
            let dash_attr = if dash.is_empty() {
                String::new()
            } else {
                format!(r#" stroke-dasharray="{dash}""#)
            };
            let _ = writeln!(
                svg,
                r#"<polyline data-sparsity="{level}" data-kind="{kind}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
                points.join(" ")
            );
        }
    }

    // Legend.
    let lx = SVG_WIDTH - MARGIN_RIGHT + 15.0;
    let _ = writeln!(svg, r#"<g font-family="sans-serif" font-size="12">"#);
    let mut ly = MARGIN_TOP + 10.0;
    for (kind, color) in KINDS {
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{kind}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0
        );
        ly += 18.0;
    }
    ly += 8.0;
    for (li, (level, _)) in levels.iter().enumerate() {
        let dash = DASHES[li % DASHES.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="black" stroke-dasharray="{dash}"/><text x="{:.1}" y="{:.1}">s/N = {level}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0
        );
        ly += 18.0;
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
