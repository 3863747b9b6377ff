// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimal 800x600 SVG line plots and heatmaps.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Short tick label; infinite values print as the infinity sign.
pub fn tick_label(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "\u{221e}".into() } else { "-\u{221e}".into() };
    }
    let a = x.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{x:.1e}")
    } else {
        let s = format!("{x:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s.is_empty() || s == "-" {
            "0".into()
        } else {
            s.into()
        }
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axis_labels(out: &mut String, x_label: &str, y_label: &str) {
    let cx = LEFT + (WIDTH - LEFT - RIGHT) / 2.0;
    let cy = TOP + (HEIGHT - TOP - BOTTOM) / 2.0;
    let _ = writeln!(
        out,
        r#"<text x="{cx}" y="{}" text-anchor="middle" font-size="15">{}</text>"#,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="25" y="{cy}" text-anchor="middle" font-size="15" transform="rotate(-90 25 {cy})">{}</text>"#,
        escape(y_label)
    );
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 0.0 { 0.05 * lo.abs() } else { 0.5 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

/// Polyline of `(x, y)` points with linear axes.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let (x0, x1) = range(points.iter().map(|p| p.0));
    let (y0, y1) = range(points.iter().map(|p| p.1));
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| TOP + h - (y - y0) / (y1 - y0) * h;

    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{w}" height="{h}" fill="none" stroke="black"/>"#);
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(x), sy(y));
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + h,
            TOP + h + 18.0,
            tick_label(x)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + w,
            LEFT - 6.0,
            py + 4.0,
            tick_label(y)
        );
    }
    let path: Vec<String> = points
        .iter()
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(out, r##"<polyline points="{}" fill="none" stroke="#1f5fa8" stroke-width="2"/>"##, path.join(" "));
    axis_labels(&mut out, x_label, y_label);
    out.push_str("</svg>\n");
    out
}

/// Viridis-like ramp from dark blue (0) to yellow (1).
fn color(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let k = STOPS.iter().position(|s| s.0 >= t).unwrap_or(4).max(1);
    let ((t0, c0), (t1, c1)) = (STOPS[k - 1], STOPS[k]);
    let f = (t - t0) / (t1 - t0);
    let mix = |i: usize| (c0[i] + f * (c1[i] - c0[i])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

/// Cells indexed by axis position; `values[i * ys.len() + j]` sits at `(xs[i], ys[j])`.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let (cw, ch) = (w / xs.len().max(1) as f64, h / ys.len().max(1) as f64);
    let (v0, v1) = range(values.iter().copied());

    for (i, _) in xs.iter().enumerate() {
        for (j, _) in ys.iter().enumerate() {
            let v = values[i * ys.len() + j];
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{v}</title></rect>"#,
                LEFT + i as f64 * cw,
                TOP + h - (j + 1) as f64 * ch,
                cw + 0.5,
                ch + 0.5,
                color((v - v0) / (v1 - v0))
            );
        }
    }
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{w}" height="{h}" fill="none" stroke="black"/>"#);
    let every = |n: usize| n.div_ceil(8).max(1);
    for (i, x) in xs.iter().enumerate().step_by(every(xs.len())) {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + (i as f64 + 0.5) * cw,
            TOP + h + 18.0,
            tick_label(*x)
        );
    }
    for (j, y) in ys.iter().enumerate().step_by(every(ys.len())) {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            TOP + h - (j as f64 + 0.5) * ch + 4.0,
            tick_label(*y)
        );
    }

    let bx = WIDTH - RIGHT + 30.0;
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{:.2}" width="20" height="{:.2}" fill="{}"/>"#,
            TOP + h - (k + 1) as f64 * h / 50.0,
            h / 50.0 + 0.5,
            color(t)
        );
    }
    for (t, v) in [(0.0, v0), (1.0, v1)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}">{}</text>"#,
            bx + 26.0,
            TOP + h - t * h + 4.0,
            format_args!("{v:.6}")
        );
    }
    let _ = writeln!(out, r#"<text x="{bx}" y="{}" >F</text>"#, TOP - 8.0);
    axis_labels(&mut out, x_label, y_label);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_well_formed() {
        let s = line_plot("t", "\u{3b8}", "e_p", &[(0.0, 0.0), (1.0, 0.5), (2.0, 0.2)]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains(r#"width="800""#) && s.contains(r#"height="600""#));
        assert!(s.contains("\u{3b8}"));
    }

    #[test]
    fn heatmap_has_one_cell_per_value() {
        let s = heatmap("h", "a", "b", &[1.0, 2.0], &[1.0, 2.0, f64::INFINITY], &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        assert_eq!(s.matches("<title>").count(), 6);
        assert!(s.contains('\u{221e}'));
    }

    #[test]
    fn labels() {
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(0.0), "0");
        assert_eq!(tick_label(1e6), "1.0e6");
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
    }
}
