//! Text formats for curves.
//!
//! A P-curve file starts with `pcurve <backend> <scale>` and lists one
//! `x y k` line per visit, where `x y` are lattice coordinates and `k` counts
//! full turns added to the short-way winding at that visit. Input polylines
//! are plain `x y` lines with decimal coordinates.

use std::fmt::Write as _;

use crate::error::HcsError;
use crate::geom::Point;
use crate::hcs::{PCurve, ScaledPolyline, Visit, Winding};
use crate::obstacles::Scale;

/// A P-curve together with the obstacle backend it was computed on.
#[derive(Clone, Debug, PartialEq)]
pub struct PCurveFile {
    pub backend: String,
    pub scale: Scale,
    pub curve: PCurve,
}

pub fn format_scale(s: Scale) -> String {
    match s {
        Scale::Exact(d) => d.to_string(),
        Scale::Real(r) => format!("{r:?}"),
    }
}

pub fn parse_scale(text: &str) -> Option<Scale> {
    if let Ok(d) = text.parse::<i64>() {
        return (d > 0).then_some(Scale::Exact(d));
    }
    text.parse::<f64>().ok().filter(|r| r.is_finite() && *r > 0.0).map(Scale::Real)
}

fn extra_turns(c: &PCurve, i: usize) -> i64 {
    if c.is_collapsed() {
        return c.visits()[0].turns;
    }
    let w = c.winding(i);
    w.turns - Winding::principal(w.class).turns
}

pub fn write_pcurve(f: &PCurveFile) -> String {
    let mut s = format!("pcurve {} {}\n", f.backend, format_scale(f.scale));
    for (i, v) in f.curve.visits().iter().enumerate() {
        let _ = writeln!(s, "{} {} {}", v.point.x, v.point.y, extra_turns(&f.curve, i));
    }
    s
}

pub fn read_pcurve(text: &str) -> Result<PCurveFile, HcsError> {
    let mut header = None;
    let mut rows: Vec<(Point, i64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| HcsError::Parse { line: i + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if f.len() != 3 || f[0] != "pcurve" {
                return Err(err("expected `pcurve <backend> <scale>` header"));
            }
            header = Some((f[1].to_string(), parse_scale(f[2]).ok_or_else(|| err("bad scale"))?));
            continue;
        }
        if f.len() != 3 {
            return Err(err("expected `x y k`"));
        }
        let num = |s: &str| s.parse::<i64>().map_err(|_| err("bad integer"));
        rows.push((Point::new(num(f[0])?, num(f[1])?), num(f[2])?));
    }
    let (backend, scale) = header.ok_or(HcsError::Parse { line: 0, msg: "empty input".into() })?;
    let shape = PCurve::new(rows.iter().map(|&(p, _)| Visit::new(p, 0)).collect())?;
    let visits = if shape.is_collapsed() {
        vec![Visit::new(rows[0].0, rows[0].1)]
    } else {
        rows.iter()
            .enumerate()
            .map(|(i, &(p, k))| Visit::new(p, Winding::principal(shape.winding(i).class).turns + k))
            .collect()
    };
    Ok(PCurveFile { backend, scale, curve: PCurve::new(visits)? })
}

/// Splits a decimal literal into an integer mantissa and a count of
/// fractional digits.
fn parse_decimal(s: &str) -> Option<(i64, u32)> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 12 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let m: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    Some((if neg { -m } else { m }, frac.len() as u32))
}

/// Reads a closed polyline given as decimal `x y` lines; coordinates are
/// kept exact over a common power-of-ten denominator.
pub fn parse_polyline(text: &str) -> Result<ScaledPolyline, HcsError> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| HcsError::Parse { line: i + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        if f.len() != 2 {
            return Err(err("expected `x y`"));
        }
        let x = parse_decimal(f[0]).ok_or_else(|| err("bad number"))?;
        let y = parse_decimal(f[1]).ok_or_else(|| err("bad number"))?;
        raw.push((x, y));
    }
    let digits = raw.iter().map(|&((_, a), (_, b))| a.max(b)).max().unwrap_or(0);
    let den = 10i64.pow(digits);
    let lift = |(m, d): (i64, u32)| m * 10i64.pow(digits - d);
    Ok(ScaledPolyline { den, vertices: raw.into_iter().map(|(x, y)| (lift(x), lift(y))).collect() })
}

pub fn format_polyline(p: &ScaledPolyline) -> String {
    let d = p.den as f64;
    let mut s = String::new();
    for &(x, y) in &p.vertices {
        let _ = writeln!(s, "{} {}", x as f64 / d, y as f64 / d);
    }
    s
}
