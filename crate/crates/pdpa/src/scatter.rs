//! Funnel plots: a CSV of the points and a self-contained SVG scatter.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pdpa_core::analysis::FunnelReport;

use crate::error::{AppError, AppResult};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub fn scatter_csv(report: &FunnelReport) -> String {
    let mut out = String::from("bb_rmsd,score\n");
    for (x, y) in &report.pairs {
        let _ = writeln!(out, "{x:?},{y:?}");
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Score against bb-rmsd with the least-squares line and its R².
pub fn scatter_svg(report: &FunnelReport) -> String {
    let (x0, x1) = range(report.pairs.iter().map(|p| p.0));
    let (y0, y1) = range(report.pairs.iter().map(|p| p.1));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g id="axes" stroke="black"><line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{m}" y1="{m}" x2="{m}" y2="{b}"/></g>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(s, r#"<g id="ticks" font-family="sans-serif" font-size="11">"#);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{:.2}</text>"#,
            px(xv),
            HEIGHT - MARGIN + 16.0,
            xv
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.3}</text>"#,
            MARGIN - 6.0,
            py(yv) + 4.0,
            yv
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">bb-rmsd (Å)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {:.2})">score</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let _ = writeln!(s, r##"<g id="points" fill="#1f77b4" fill-opacity="0.7">"##);
    for (x, y) in &report.pairs {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, px(*x), py(*y));
    }
    let _ = writeln!(s, "</g>");

    let f = &report.fit;
    let _ = writeln!(
        s,
        r##"<line id="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#d62728" stroke-width="1.5" clip-path="url(#plot)"/>"##,
        px(x0),
        py(f.intercept + f.slope * x0),
        px(x1),
        py(f.intercept + f.slope * x1)
    );
    let _ = writeln!(
        s,
        r#"<clipPath id="plot"><rect x="{m}" y="{m}" width="{w}" height="{h}"/></clipPath>"#,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );

    let mut title = report.protein.clone();
    if !report.channels.is_empty() {
        if !title.is_empty() {
            title.push_str("  ");
        }
        title.push_str(&report.channels.join(", "));
    }
    let _ = writeln!(
        s,
        r#"<text id="title" x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&title)
    );
    let _ = writeln!(
        s,
        r#"<text id="r2" x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="13">R² = {:.3}  ρ = {:.3}  n = {}</text>"#,
        WIDTH - MARGIN - 6.0,
        MARGIN + 16.0,
        f.r_squared,
        report.spearman,
        report.pairs.len()
    );
    s.push_str("</svg>\n");
    s
}

/// Writes `<stem>.csv` and `<stem>.svg` into `dir`.
pub fn emit_scatter(report: &FunnelReport, dir: &Path, stem: &str) -> AppResult<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let csv = dir.join(format!("{stem}.csv"));
    let svg = dir.join(format!("{stem}.svg"));
    std::fs::write(&csv, scatter_csv(report)).map_err(|e| AppError::io(&csv, e))?;
    std::fs::write(&svg, scatter_svg(report)).map_err(|e| AppError::io(&svg, e))?;
    Ok((csv, svg))
}
