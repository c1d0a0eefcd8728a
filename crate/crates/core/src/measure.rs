//! Curve measures: length, total absolute curvature, inflection edges,
//! simplicity, disjointness and the h-distance between polylines.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::f64::consts::PI;

use crate::error::HcsError;
use crate::geom::{cross, dot, orient, segments_intersect, FPoint, FPolyline, Orientation, Point, Polyline};
use crate::hcs::PCurve;

/// Total absolute curvature, with a flag set when the curve has fewer than
/// three visits (the value is then 0 by convention).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature {
    pub radians: f64,
    pub degenerate: bool,
}

/// `Σ |sign(α)·π − α|` over all visits, taking `sign(0) = +1`.
pub fn total_abs_curvature(c: &PCurve) -> Curvature {
    if c.len() < 3 {
        return Curvature { radians: 0.0, degenerate: true };
    }
    let radians = (0..c.len())
        .map(|i| {
            let a = c.alpha(i);
            let s = if c.winding(i).signum() < 0 { -1.0 } else { 1.0 };
            (s * PI - a).abs()
        })
        .sum();
    Curvature { radians, degenerate: false }
}

pub fn polyline_length(p: &Polyline) -> f64 {
    p.to_f64().length()
}

/// Drops vertices where the polyline neither turns nor reverses.
fn minimalized(vs: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = vs.to_vec();
    loop {
        let n = out.len();
        if n < 3 {
            return out;
        }
        let keep: Vec<bool> = (0..n)
            .map(|i| orient(out[(i + n - 1) % n], out[i], out[(i + 1) % n]) != Orientation::Collinear)
            .collect();
        if keep.iter().all(|&k| k) {
            return out;
        }
        // Remove one at a time so that a run of collinear points is handled
        // against its surviving neighbours.
        let i = keep.iter().position(|&k| !k).unwrap();
        out.remove(i);
    }
}

/// Number of edges whose two endpoints turn in opposite directions, for a
/// closed simple polyline.
pub fn inflection_edge_count(c: &Polyline) -> Result<usize, HcsError> {
    if !polygon_is_simple(&c.vertices) {
        return Err(HcsError::NotSimple);
    }
    let vs = minimalized(&c.vertices);
    let n = vs.len();
    if n < 3 {
        return Ok(0);
    }
    let turn: Vec<Orientation> = (0..n).map(|i| orient(vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n])).collect();
    Ok((0..n).filter(|&i| turn[i] != turn[(i + 1) % n]).count())
}

/// True when no obstacle is visited twice and edges meet only at shared
/// consecutive endpoints. Curves of one or two visits count as simple.
pub fn is_simple(c: &PCurve) -> bool {
    if c.len() <= 2 {
        return true;
    }
    polygon_is_simple(&c.points().collect::<Vec<_>>())
}

fn polygon_is_simple(vs: &[Point]) -> bool {
    let n = vs.len();
    if n <= 2 {
        return n <= 1 || vs[0] != vs[1];
    }
    let mut seen = HashSet::with_capacity(n);
    if !vs.iter().all(|p| seen.insert(*p)) {
        return false;
    }
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        // Consecutive edges (a, b), (b, c) may only overlap by folding back.
        let c = vs[(i + 2) % n];
        if orient(a, b, c) == Orientation::Collinear && dot(a - b, c - b) > 0 {
            return false;
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(a, b, vs[j], vs[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// True when the curve is the boundary of a convex polygon traversed once:
/// simple, every turn in the same direction and no winding of a full turn
/// or more. Curves of one or two visits count as convex.
pub fn is_convex_boundary(c: &PCurve) -> bool {
    let n = c.len();
    if n <= 2 {
        return true;
    }
    if (0..n).any(|i| c.alpha(i).abs() >= 2.0 * PI) || !is_simple(c) {
        return false;
    }
    let vs = c.visits();
    let mut sign = Orientation::Collinear;
    for i in 0..n {
        let o = orient(vs[(i + n - 1) % n].point, vs[i].point, vs[(i + 1) % n].point);
        if o == Orientation::Collinear {
            continue;
        } else if sign == Orientation::Collinear {
            sign = o;
        } else if o != sign {
            return false;
        }
    }
    sign != Orientation::Collinear
}

/// True when the two curves share no obstacle and no edges intersect.
pub fn curves_disjoint(a: &PCurve, b: &PCurve) -> bool {
    let pa: HashSet<Point> = a.points().collect();
    if b.points().any(|p| pa.contains(&p)) {
        return false;
    }
    let ea: Vec<(Point, Point)> = a.polyline().edges().collect();
    let eb: Vec<(Point, Point)> = b.polyline().edges().collect();
    ea.iter().all(|&(p, q)| eb.iter().all(|&(r, s)| !segments_intersect(p, q, r, s)))
}

/// A non-negative rational `num / den`, compared exactly.
#[derive(Clone, Copy, Debug)]
pub struct SqDist {
    pub num: u128,
    pub den: u128,
}

impl SqDist {
    pub const ZERO: SqDist = SqDist { num: 0, den: 1 };

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | ((mid & mask) << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl PartialEq for SqDist {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for SqDist {}

impl PartialOrd for SqDist {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for SqDist {
    fn cmp(&self, o: &Self) -> Ordering {
        mul_wide(self.num, o.den).cmp(&mul_wide(o.num, self.den))
    }
}

/// Exact squared distance from `p` to segment `ab`.
pub fn point_segment_sq(p: Point, a: Point, b: Point) -> SqDist {
    let ab = b - a;
    let ap = p - a;
    let t = dot(ap, ab);
    let len = ab.norm_sq();
    if len == 0 || t <= 0 {
        return SqDist { num: ap.norm_sq() as u128, den: 1 };
    }
    if t >= len {
        return SqDist { num: (p - b).norm_sq() as u128, den: 1 };
    }
    let c = cross(ab, ap).unsigned_abs();
    let (hi, lo) = mul_wide(c, c);
    if hi == 0 {
        return SqDist { num: lo, den: len as u128 };
    }
    // Too large for an exact fraction; the perpendicular foot is then far
    // from lattice scale and a float is adequate for ranking.
    let d = c as f64 / (len as f64).sqrt();
    SqDist { num: (d * d) as u128, den: 1 }
}

fn point_polyline_sq(p: Point, c: &Polyline) -> SqDist {
    if c.vertices.len() == 1 {
        return SqDist { num: (p - c.vertices[0]).norm_sq() as u128, den: 1 };
    }
    c.edges().map(|(a, b)| point_segment_sq(p, a, b)).min().unwrap_or(SqDist::ZERO)
}

/// Exact squared h-distance: the larger of the two directed maxima of
/// vertex-to-curve distances.
pub fn h_distance_sq(a: &Polyline, b: &Polyline) -> SqDist {
    let dir = |x: &Polyline, y: &Polyline| x.vertices.iter().map(|&p| point_polyline_sq(p, y)).max().unwrap_or(SqDist::ZERO);
    dir(a, b).max(dir(b, a))
}

fn fpoint_segment(p: FPoint, a: FPoint, b: FPoint) -> f64 {
    let ab = b - a;
    let len = ab.dot(ab);
    if len == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len).clamp(0.0, 1.0);
    p.dist(a + ab.scale(t))
}

fn fpoint_polyline(p: FPoint, c: &FPolyline) -> f64 {
    if c.vertices.len() == 1 {
        return p.dist(c.vertices[0]);
    }
    c.edges().map(|(a, b)| fpoint_segment(p, a, b)).fold(f64::INFINITY, f64::min)
}

/// h-distance between floating polylines (for reporting and for comparing
/// curves drawn at different lattice scales).
pub fn h_distance(a: &FPolyline, b: &FPolyline) -> f64 {
    let dir = |x: &FPolyline, y: &FPolyline| x.vertices.iter().map(|&p| fpoint_polyline(p, y)).fold(0.0, f64::max);
    dir(a, b).max(dir(b, a))
}
