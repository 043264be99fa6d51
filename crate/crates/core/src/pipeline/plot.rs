//! Deterministic SVG line charts of the raw inputs.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::series::{Dataset, TimeSeries};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: [f64; 4] = [40.0, 20.0, 40.0, 80.0]; // top, right, bottom, left

/// Annual growth in percent; `gdp_growth` when present, otherwise the
/// growth of nominal GDP.
pub fn growth_series(raw: &Dataset) -> Option<(TimeSeries, &'static str)> {
    if let Some(g) = raw.get("gdp_growth") {
        return Some((g.clone(), "GDP growth (annual %)"));
    }
    let gdp = raw.get("gdp")?;
    let v = gdp.values();
    let g: Vec<f64> = v.windows(2).map(|w| 100.0 * (w[1] / w[0] - 1.0)).collect();
    let s = TimeSeries::new("gdp_growth", gdp.start_year() + 1, g).ok()?;
    Some((s, "Nominal GDP growth, current US$ (annual %)"))
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let k = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    k * mag
}

fn fmt_tick(x: f64) -> String {
    let a = x.abs();
    if a >= 1e9 {
        format!("{:.1}B", x / 1e9)
    } else if a >= 1e6 {
        format!("{:.1}M", x / 1e6)
    } else if a == 0.0 || a >= 1.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One line chart with a y grid, first/last year labels and a `<title>` on
/// each point.
pub fn line_chart_svg(s: &TimeSeries, title: &str) -> String {
    let [top, right, bottom, left] = MARGIN;
    let (pw, ph) = (WIDTH - left - right, HEIGHT - top - bottom);
    let v = s.values();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let step = nice_step(span);
    let (y0, y1) = ((lo / step).floor() * step, (hi / step).ceil() * step);
    let n = v.len().max(2) - 1;
    let x = |i: usize| left + pw * i as f64 / n as f64;
    let y = |val: f64| top + ph * (y1 - val) / (y1 - y0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let mut tick = y0;
    while tick <= y1 + step * 1e-9 {
        let ty = y(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{left}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#ddd"/>"##,
            left + pw
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 6.0,
            ty + 4.0,
            fmt_tick(tick)
        );
        tick += step;
    }
    let points: Vec<String> = v
        .iter()
        .enumerate()
        .map(|(i, val)| format!("{:.2},{:.2}", x(i), y(*val)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline fill="none" stroke="#1f5fa8" stroke-width="2" points="{}"/>"##,
        points.join(" ")
    );
    for (i, (year, val)) in s.years().zip(v).enumerate() {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#1f5fa8"><title>{year}: {val:.2}</title></circle>"##,
            x(i),
            y(*val)
        );
    }
    let base = top + ph + 18.0;
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="{base}" text-anchor="start">{}</text>"#,
        s.start_year()
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{base}" text-anchor="end">{}</text>"#,
        left + pw,
        s.end_year()
    );
    out.push_str("</svg>\n");
    out
}

/// Writes `gdp_growth.svg`, `fdi.svg`, `rem.svg` and `aid.svg` into `dir`.
pub fn emit_plots(raw: &Dataset, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut charts = Vec::new();
    if let Some((g, title)) = growth_series(raw) {
        charts.push((g, title));
    }
    for (name, title) in [
        ("fdi", "FDI, net inflows (current US$)"),
        ("rem", "Personal remittances, received (current US$)"),
        ("aid", "Net ODA received (current US$)"),
    ] {
        if let Some(s) = raw.get(name) {
            charts.push((s.clone(), title));
        }
    }
    let mut written = Vec::with_capacity(charts.len());
    for (s, title) in charts {
        let path = dir.join(format!("{}.svg", s.name()));
        std::fs::write(&path, line_chart_svg(&s, title))?;
        written.push(path);
    }
    Ok(written)
}
