// SPDX-License-Identifier: Apache-2.0

//! Minimal SVG line plot: axes, ticks and a legend.

use std::fmt::Write;

use crate::error::CliError;

pub const MAX_SERIES: usize = 8;

const COLORS: [&str; MAX_SERIES] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 48.0;

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `series` against `x`. Every series must match `x` in length.
pub fn line_plot(x_label: &str, x: &[f64], series: &[(&str, &[f64])]) -> Result<String, CliError> {
    if series.is_empty() || series.len() > MAX_SERIES {
        return Err(CliError::config(format!("plot needs 1 to {MAX_SERIES} series, got {}", series.len())));
    }
    if let Some((name, _)) = series.iter().find(|(_, v)| v.len() != x.len()) {
        return Err(CliError::config(format!("series `{name}` does not match the x axis length")));
    }
    let (x0, x1) = span(x.iter().copied());
    let (y0, y1) = span(series.iter().flat_map(|(_, v)| v.iter().copied()));
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let py = |v: f64| TOP + (1.0 - (v - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(s, r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{:.2}" text-anchor="middle">{xv:.4}</text>"#, TOP + ph + 18.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{ty:.2}" x2="{LEFT}" y2="{ty:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#, LEFT - 8.0, ty + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 10.0, escape(x_label));
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i];
        let pts: Vec<String> = x.iter().zip(ys.iter()).filter(|(_, y)| y.is_finite()).map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = TOP + 12.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series_and_legend() {
        let x = [0.0, 1.0, 2.0];
        let a = [0.0, 0.5, 1.0];
        let b = [1.0, 1.0, 1.0];
        let svg = line_plot("time", &x, &[("a<b", &a), ("flat", &b)]).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a&lt;b"));
    }

    #[test]
    fn rejects_bad_series() {
        let x = [0.0, 1.0];
        let y = [0.0, 1.0];
        let many: Vec<(&str, &[f64])> = (0..9).map(|_| ("s", &y[..])).collect();
        assert!(line_plot("t", &x, &many).is_err());
        assert!(line_plot("t", &x, &[]).is_err());
        assert!(line_plot("t", &x, &[("short", &y[..1])]).is_err());
    }
}
