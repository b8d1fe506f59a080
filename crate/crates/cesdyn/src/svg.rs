//! Minimal SVG chart: carbon tax (top) and fossil share (bottom) against t.

use std::fmt::Write as _;

use cesdyn_core::TrajectoryRow;

const WIDTH: f64 = 640.0;
const PANEL: f64 = 220.0;
const MARGIN: f64 = 50.0;

fn panel(out: &mut String, top: f64, title: &str, color: &str, points: &[(f64, f64)]) {
    let (t_max, lo, hi) = points.iter().fold(
        (1.0f64, f64::INFINITY, f64::NEG_INFINITY),
        |(t, lo, hi), &(x, y)| (t.max(x), lo.min(y), hi.max(y)),
    );
    let (lo, hi) = if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    };
    let inner_w = WIDTH - 2.0 * MARGIN;
    let inner_h = PANEL - 40.0;
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{:.2}" width="{inner_w}" height="{inner_h}" fill="none" stroke="gray"/>"#,
        top + 20.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.2}" font-size="13">{title}</text>"#,
        top + 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        top + 30.0,
        crate::io::fmt_g12(hi)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        top + 20.0 + inner_h,
        crate::io::fmt_g12(lo)
    );
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| {
            let px = MARGIN + inner_w * x / t_max;
            let py = top + 20.0 + inner_h * (1.0 - (y - lo) / (hi - lo));
            format!("{px:.2},{py:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
}

pub fn trajectory_svg(title: &str, rows: &[TrajectoryRow]) -> String {
    let height = 2.0 * PANEL + 30.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="16" font-size="14" font-weight="bold">{}</text>"#,
        escape(title)
    );
    let tax: Vec<(f64, f64)> = rows.iter().map(|r| (r.t as f64, r.carbon_tax)).collect();
    let share: Vec<(f64, f64)> = rows.iter().map(|r| (r.t as f64, r.share_fossil)).collect();
    panel(&mut out, 20.0, "carbon tax", "#c0392b", &tax);
    panel(&mut out, 20.0 + PANEL, "fossil share", "#2c3e50", &share);
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
