//! Minimal log-log SVG of each `(metric, delta)` series against N.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qkin::limits::ConvergenceTable;

use crate::error::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn plot_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".svg");
    PathBuf::from(name)
}

fn series(table: &ConvergenceTable) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut metrics: Vec<&str> = table.rows().iter().map(|r| r.metric.as_str()).collect();
    metrics.dedup();
    let mut out = Vec::new();
    for metric in metrics {
        for delta in table.deltas(metric) {
            let points: Vec<(f64, f64)> = table
                .series(metric, delta)
                .into_iter()
                .filter(|&(_, v)| v > 0.0)
                .map(|(n, v)| ((n as f64).log10(), v.log10()))
                .collect();
            if !points.is_empty() {
                out.push((format!("{metric} δ={delta}"), points));
            }
        }
    }
    out
}

pub fn svg_string(table: &ConvergenceTable) -> String {
    let all = series(table);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (_, pts) in &all {
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if all.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (x0, x1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    for e in (x0 as i64)..=(x1 as i64) {
        let x = sx(e as f64);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{e}</text>"#, HEIGHT - MARGIN + 16.0);
    }
    for e in (y0 as i64)..=(y1 as i64) {
        let y = sy(e as f64);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">1e{e}</text>"#, MARGIN - 6.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">N</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    for (i, (label, pts)) in all.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{label}</text>"#,
            MARGIN + 8.0,
            MARGIN + 14.0 * (i + 1) as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_plot(table: &ConvergenceTable, out: &Path) -> Result<PathBuf> {
    let path = plot_path(out);
    std::fs::write(&path, svg_string(table)).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
