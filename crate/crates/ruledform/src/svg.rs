//! Minimal self-contained SVG 1.1 line plots: no external assets, no
//! plotting dependencies, byte-deterministic output for a fixed input.

use std::fmt::Write;

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 400.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 14.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 46.0;

fn nice_bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        let pad = lo.abs().max(1.0) * 0.1;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.06;
    (lo - pad, hi + pad)
}

fn render_panel(out: &mut String, panel: &Panel, x0: f64) {
    let (xlo, xhi) = nice_bounds(
        panel
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0)),
    );
    let (ylo, yhi) = nice_bounds(
        panel
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1)),
    );
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let px = |x: f64| x0 + MARGIN_L + (x - xlo) / (xhi - xlo) * plot_w;
    let py = |y: f64| MARGIN_T + plot_h - (y - ylo) / (yhi - ylo) * plot_h;

    let _ = writeln!(
        out,
        "  <rect x=\"{:.2}\" y=\"{MARGIN_T:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>",
        x0 + MARGIN_L
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"14\" fill=\"#000000\">{}</text>",
        x0 + MARGIN_L,
        MARGIN_T - 12.0,
        xml_escape(&panel.title)
    );

    for k in 0..5 {
        let fx = xlo + (xhi - xlo) * k as f64 / 4.0;
        let gx = px(fx);
        let _ = writeln!(
            out,
            "  <line x1=\"{gx:.2}\" y1=\"{:.2}\" x2=\"{gx:.2}\" y2=\"{:.2}\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>",
            MARGIN_T,
            MARGIN_T + plot_h
        );
        let _ = writeln!(
            out,
            "  <text x=\"{gx:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"10\" fill=\"#333333\" text-anchor=\"middle\">{fx:.3}</text>",
            MARGIN_T + plot_h + 14.0
        );
        let fy = ylo + (yhi - ylo) * k as f64 / 4.0;
        let gy = py(fy);
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{gy:.2}\" x2=\"{:.2}\" y2=\"{gy:.2}\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>",
            x0 + MARGIN_L,
            x0 + MARGIN_L + plot_w
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"10\" fill=\"#333333\" text-anchor=\"end\">{fy:.3}</text>",
            x0 + MARGIN_L - 6.0,
            gy + 3.0
        );
    }
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" fill=\"#000000\" text-anchor=\"middle\">{}</text>",
        x0 + MARGIN_L + plot_w / 2.0,
        MARGIN_T + plot_h + 34.0,
        xml_escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" fill=\"#000000\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>",
        x0 + 16.0,
        MARGIN_T + plot_h / 2.0,
        x0 + 16.0,
        MARGIN_T + plot_h / 2.0,
        xml_escape(&panel.y_label)
    );

    for (si, series) in panel.series.iter().enumerate() {
        if series.points.is_empty() {
            continue;
        }
        let mut path = String::new();
        for (i, &(x, y)) in series.points.iter().enumerate() {
            let _ = write!(
                path,
                "{}{:.2},{:.2}",
                if i == 0 { "" } else { " " },
                px(x),
                py(y)
            );
        }
        let _ = writeln!(
            out,
            "  <polyline points=\"{path}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            series.color
        );
        let ly = MARGIN_T + 16.0 + 14.0 * si as f64;
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{}\" stroke-width=\"2\"/>",
            x0 + MARGIN_L + plot_w - 120.0,
            x0 + MARGIN_L + plot_w - 100.0,
            series.color
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" fill=\"#000000\">{}</text>",
            x0 + MARGIN_L + plot_w - 94.0,
            ly + 3.5,
            xml_escape(&series.label)
        );
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders one or more panels side by side as a standalone SVG 1.1 document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{PANEL_H:.0}\" viewBox=\"0 0 {width:.0} {PANEL_H:.0}\">"
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{width:.0}\" height=\"{PANEL_H:.0}\" fill=\"#ffffff\"/>"
    );
    for (i, p) in panels.iter().enumerate() {
        render_panel(&mut out, p, PANEL_W * i as f64);
    }
    let _ = writeln!(out, "</svg>");
    out
}
