//! Minimal SVG line plots for report directories. Convenience output only:
//! nothing asserts against these files, they just make a run inspectable
//! without a plotting stack.

use std::fmt::Write as _;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn finite(points: &[(f64, f64)]) -> impl Iterator<Item = &(f64, f64)> {
    points.iter().filter(|(x, y)| x.is_finite() && y.is_finite())
}

/// One fixed-size plot with axes, tick labels, and a legend. Deterministic
/// output for identical input.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in finite(s.points) {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    if xmax - xmin < 1e-12 {
        xmax = xmin + 1.0;
    }
    if ymax - ymin < 1e-12 {
        ymax = ymin + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * (HEIGHT - 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );
    // axes
    let _ = writeln!(
        out,
        r#"<path d="M {m} {m} L {m} {b} L {r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = xmin + f * (xmax - xmin);
        let yv = ymin + f * (ymax - ymin);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{xv:.3}</text>"#,
            sx(xv),
            HEIGHT - MARGIN + 18.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{yv:.3}</text>"#,
            MARGIN - 6.0,
            sy(yv) + 4.0
        );
        let _ = writeln!(
            out,
            r##"<line x1="{m}" y1="{y:.1}" x2="{r}" y2="{y:.1}" stroke="#dddddd"/>"##,
            m = MARGIN,
            r = WIDTH - MARGIN,
            y = sy(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{xlabel}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {y})">{ylabel}</text>"#,
        HEIGHT / 2.0,
        y = HEIGHT / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for (j, &(x, y)) in finite(s.points).enumerate() {
            let _ = write!(path, "{}{:.2} {:.2} ", if j == 0 { "M " } else { "L " }, sx(x), sy(y));
        }
        if !path.is_empty() {
            let _ = writeln!(
                out,
                r#"<path d="{}" stroke="{color}" stroke-width="1.5" fill="none"/>"#,
                path.trim_end()
            );
        }
        let ly = 40.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.1}" y1="{ly:.1}" x2="{x1:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            x0 = WIDTH - MARGIN - 150.0,
            x1 = WIDTH - MARGIN - 126.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            s.label,
            x = WIDTH - MARGIN - 120.0,
            y = ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
