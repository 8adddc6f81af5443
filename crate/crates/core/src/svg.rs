//! Side-by-side SVG panels for comparing polylines.

use std::fmt::Write as _;

use crate::geometry::{Point, Polyline};

const PANEL: f64 = 300.0;
const MARGIN: f64 = 24.0;
const TITLE: f64 = 22.0;
const VERTEX_RADIUS: f64 = 3.0;
const END_MARK: f64 = 5.0;

/// One titled panel.
#[derive(Debug, Clone, Copy)]
pub struct Panel<'a> {
    pub title: &'a str,
    pub polyline: &'a Polyline,
}

/// Renders input, initial reconstruction and final polyline left to right.
/// A missing or empty `final_polyline` drops the third panel.
pub fn render_triptych(input: &Polyline, initial: &Polyline, final_polyline: Option<&Polyline>) -> String {
    let mut panels = vec![
        Panel {
            title: "input",
            polyline: input,
        },
        Panel {
            title: "initial",
            polyline: initial,
        },
    ];
    if let Some(p) = final_polyline.filter(|p| !p.is_empty()) {
        panels.push(Panel {
            title: "final",
            polyline: p,
        });
    }
    render_panels(&panels)
}

/// Renders panels side by side at one common scale, each centred in its
/// cell. Vertices are dots; an open chain's first point is a square and its
/// last point a cross, so a closure gap shows as two separate markers.
pub fn render_panels(panels: &[Panel<'_>]) -> String {
    let extent = panels
        .iter()
        .filter_map(|p| p.polyline.bounding_box())
        .map(|(lo, hi)| (hi.x - lo.x).max(hi.y - lo.y))
        .fold(0.0_f64, f64::max);
    let scale = if extent > 0.0 { (PANEL - 2.0 * MARGIN) / extent } else { 1.0 };
    let width = PANEL * panels.len().max(1) as f64;
    let height = PANEL + TITLE;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt(width),
        h = fmt(height)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, panel) in panels.iter().enumerate() {
        let left = PANEL * k as f64;
        let _ = writeln!(
            out,
            r##"<g class="panel"><rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#cccccc"/>"##,
            fmt(left),
            fmt(TITLE),
            fmt(PANEL),
            fmt(PANEL)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="16" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            fmt(left + PANEL / 2.0),
            escape(panel.title)
        );
        draw_polyline(&mut out, panel.polyline, left, scale);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn draw_polyline(out: &mut String, polyline: &Polyline, left: f64, scale: f64) {
    let Some((lo, hi)) = polyline.bounding_box() else {
        return;
    };
    let cx = (lo.x + hi.x) / 2.0;
    let cy = (lo.y + hi.y) / 2.0;
    // SVG y grows downwards.
    let map = |p: &Point| {
        (
            left + PANEL / 2.0 + (p.x - cx) * scale,
            TITLE + PANEL / 2.0 - (p.y - cy) * scale,
        )
    };
    let coords: Vec<(f64, f64)> = polyline.points().iter().map(map).collect();
    let list = coords
        .iter()
        .map(|&(x, y)| format!("{},{}", fmt(x), fmt(y)))
        .collect::<Vec<_>>()
        .join(" ");
    let element = if polyline.is_closed() { "polygon" } else { "polyline" };
    let _ = writeln!(
        out,
        r##"<{element} points="{list}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>"##
    );
    let dots = if polyline.is_closed() { &coords[..] } else { &coords[1..coords.len() - 1] };
    for &(x, y) in dots {
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="#1f4e9c"/>"##,
            fmt(x),
            fmt(y),
            fmt(VERTEX_RADIUS)
        );
    }
    if !polyline.is_closed() {
        if let (Some(&(sx, sy)), Some(&(ex, ey))) = (coords.first(), coords.last()) {
            let _ = writeln!(
                out,
                r##"<rect class="start" x="{}" y="{}" width="{s}" height="{s}" fill="#2a9d3a"/>"##,
                fmt(sx - END_MARK),
                fmt(sy - END_MARK),
                s = fmt(2.0 * END_MARK)
            );
            let _ = writeln!(
                out,
                r##"<path class="end" d="M{} {} L{} {} M{} {} L{} {}" stroke="#c0392b" stroke-width="2"/>"##,
                fmt(ex - END_MARK),
                fmt(ey - END_MARK),
                fmt(ex + END_MARK),
                fmt(ey + END_MARK),
                fmt(ex - END_MARK),
                fmt(ey + END_MARK),
                fmt(ex + END_MARK),
                fmt(ey - END_MARK)
            );
        }
    }
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
