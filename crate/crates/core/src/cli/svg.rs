//! Minimal SVG line plots with linear axes.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

/// Roughly `target` round tick positions covering [lo, hi].
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * magnitude).find(|&s| s >= raw).unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plot of `points` (x increasing) with the y axis starting at zero.
pub fn line_plot(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str, description: &str) -> String {
    let x_lo = 0f64.min(points.first().map_or(0.0, |p| p.0));
    let x_hi = points.last().map_or(1.0, |p| p.0).max(x_lo + f64::EPSILON);
    let y_max = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let y_hi = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - y / y_hi * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, "<desc>{}</desc>", escape(description)).unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{b}"/></g>"#,
        b = TOP + plot_h,
        r = LEFT + plot_w
    )
    .unwrap();

    svg.push_str(r#"<g font-family="sans-serif" font-size="12">"#);
    svg.push('\n');
    for x in ticks(x_lo, x_hi, 10) {
        let px = sx(x);
        writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{t}" stroke="black"/><text x="{px:.2}" y="{l}" text-anchor="middle">{x}</text>"#,
            b = TOP + plot_h,
            t = TOP + plot_h + 5.0,
            l = TOP + plot_h + 20.0,
            x = format_tick(x)
        )
        .unwrap();
    }
    for y in ticks(0.0, y_hi, 8) {
        let py = sy(y);
        writeln!(
            svg,
            r#"<line x1="{a}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{l}" y="{py:.2}" text-anchor="end" dominant-baseline="middle">{y}</text>"#,
            a = LEFT - 5.0,
            l = LEFT - 8.0,
            y = format_tick(y)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">{}</text>"#,
        escape(y_label),
        y = TOP + plot_h / 2.0
    )
    .unwrap();
    svg.push_str("</g>\n");

    svg.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points=""#);
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            svg.push(' ');
        }
        write!(svg, "{:.2},{:.2}", sx(x), sy(y)).unwrap();
    }
    svg.push_str("\"/>\n</svg>\n");
    svg
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
