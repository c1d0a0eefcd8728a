use std::fmt::Write as _;
use std::path::Path;

use crate::error::HcsError;
use crate::geom::FPolyline;

/// A curve to draw, with its legend label.
#[derive(Clone, Debug)]
pub struct SvgCurve {
    pub label: String,
    pub curve: FPolyline,
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;
const LEGEND_ROW: f64 = 16.0;

/// Colour `i` of `n`, running from blue to red.
fn colour(i: usize, n: usize) -> String {
    let f = if n <= 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
    let r = (40.0 + 200.0 * f).round() as u8;
    let b = (220.0 - 180.0 * f).round() as u8;
    format!("#{r:02x}50{b:02x}")
}

/// Overlays the curves on one canvas (y axis pointing up) with a legend.
/// Output depends only on the input.
pub fn render_svg(curves: &[SvgCurve]) -> String {
    let pts = curves.iter().flat_map(|c| c.curve.vertices.iter());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let k = (SIZE - 2.0 * MARGIN) / span;
    let legend = curves.len() as f64 * LEGEND_ROW;
    let height = SIZE + legend;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{height}" fill="white"/>"#);
    let n = curves.len();
    for (i, c) in curves.iter().enumerate() {
        let mut d = String::new();
        for (j, p) in c.curve.vertices.iter().enumerate() {
            let x = MARGIN + (p.x - x0) * k;
            let y = SIZE - MARGIN - (p.y - y0) * k;
            let _ = write!(d, "{}{x:.2},{y:.2}", if j == 0 { "M" } else { " L" });
        }
        if c.curve.closed && !c.curve.vertices.is_empty() {
            d.push_str(" Z");
        }
        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1"/>"#, colour(i, n));
    }
    for (i, c) in curves.iter().enumerate() {
        let y = SIZE + (i as f64 + 0.75) * LEGEND_ROW;
        let _ = writeln!(
            s,
            r#"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#,
            MARGIN + 30.0,
            colour(i, n),
            MARGIN + 36.0,
            y + 4.0,
            escape(&c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_svg(curves: &[SvgCurve], path: &Path) -> Result<(), HcsError> {
    std::fs::write(path, render_svg(curves))?;
    Ok(())
}
