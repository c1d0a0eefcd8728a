//! Exact planar primitives on integer lattice points.
//!
//! Every predicate here is evaluated in `i128`, so no rounding happens inside
//! an orientation, intersection or angle-ordering test. Floating point only
//! appears in the measures that are reported (lengths, angles in radians).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or displacement vector) with exact integer coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn norm_sq(self) -> i128 {
        dot(self, self)
    }

    pub fn to_f64(self) -> FPoint {
        FPoint::new(self.x as f64, self.y as f64)
    }

    /// Euclidean distance between two lattice points.
    pub fn dist(self, other: Point) -> f64 {
        ((other - self).norm_sq() as f64).sqrt()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// z-component of the cross product `a × b`.
#[inline]
pub fn cross(a: Point, b: Point) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

#[inline]
pub fn dot(a: Point, b: Point) -> i128 {
    a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128
}

/// Orientation of an ordered point triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn from_sign(s: i128) -> Self {
        match s.cmp(&0) {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }

    pub fn signum(self) -> i32 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Twice the signed area of triangle `abc`.
#[inline]
pub fn signed_area2(a: Point, b: Point, c: Point) -> i128 {
    cross(b - a, c - a)
}

/// Exact orientation of `c` relative to the directed line `a → b`.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    Orientation::from_sign(signed_area2(a, b, c))
}

/// Half-plane index of `v` relative to reference direction `r`: 0 when the
/// counter-clockwise angle from `r` to `v` lies in `[0, π)`, 1 for `[π, 2π)`.
#[inline]
fn half(r: Point, v: Point) -> u8 {
    let c = cross(r, v);
    if c > 0 || (c == 0 && dot(r, v) > 0) {
        0
    } else {
        1
    }
}

/// Compares the counter-clockwise angles, measured from `r` in `[0, 2π)`, of the
/// non-zero vectors `a` and `b`.
pub fn ccw_angle_cmp(r: Point, a: Point, b: Point) -> Ordering {
    debug_assert!(!r.is_zero() && !a.is_zero() && !b.is_zero());
    let (ha, hb) = (half(r, a), half(r, b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match cross(a, b).cmp(&0) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Counter-clockwise angle from `r` to `v` in `[0, 2π)`, as a float.
pub fn ccw_angle(r: Point, v: Point) -> f64 {
    let a = (cross(r, v) as f64).atan2(dot(r, v) as f64);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// True if `p` lies on the closed segment `ab`.
pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    signed_area2(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// True if `p` lies strictly inside segment `ab` (endpoints excluded).
pub fn in_segment_interior(a: Point, b: Point, p: Point) -> bool {
    p != a && p != b && on_segment(a, b, p)
}

/// True if closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != Orientation::Collinear && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear && o4 != Orientation::Collinear
    {
        return true;
    }
    (o1 == Orientation::Collinear && on_segment(a, b, c))
        || (o2 == Orientation::Collinear && on_segment(a, b, d))
        || (o3 == Orientation::Collinear && on_segment(c, d, a))
        || (o4 == Orientation::Collinear && on_segment(c, d, b))
}

/// True if the open segments `ab` and `cd` cross at a single interior point.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Point whose coordinates are rationals over a shared positive denominator,
/// used for query locations that are not lattice points (e.g. the vertices of
/// an input curve expressed in lattice units).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatPoint {
    pub x: i64,
    pub y: i64,
    pub den: i64,
}

impl RatPoint {
    pub fn new(x: i64, y: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        RatPoint { x, y, den }
    }

    pub fn from_point(p: Point) -> Self {
        RatPoint { x: p.x, y: p.y, den: 1 }
    }

    pub fn to_f64(self) -> FPoint {
        FPoint::new(self.x as f64 / self.den as f64, self.y as f64 / self.den as f64)
    }

    /// Squared distance to a lattice point, scaled by `den²` so it stays integral.
    pub fn dist_sq_scaled(self, p: Point) -> i128 {
        let dx = self.x as i128 - p.x as i128 * self.den as i128;
        let dy = self.y as i128 - p.y as i128 * self.den as i128;
        dx * dx + dy * dy
    }
}

/// Floating-point point, used by the flow simulator and for reporting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FPoint {
    pub x: f64,
    pub y: f64,
}

impl FPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        FPoint { x, y }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn dot(self, o: FPoint) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: FPoint) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn scale(self, s: f64) -> FPoint {
        FPoint::new(self.x * s, self.y * s)
    }

    pub fn dist(self, o: FPoint) -> f64 {
        (o - self).norm()
    }
}

impl Add for FPoint {
    type Output = FPoint;
    fn add(self, o: FPoint) -> FPoint {
        FPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for FPoint {
    type Output = FPoint;
    fn sub(self, o: FPoint) -> FPoint {
        FPoint::new(self.x - o.x, self.y - o.y)
    }
}

/// A polyline over lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyline {
    pub vertices: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn closed(vertices: Vec<Point>) -> Self {
        Polyline { vertices, closed: true }
    }

    pub fn open(vertices: Vec<Point>) -> Self {
        Polyline { vertices, closed: false }
    }

    /// Iterates the edges `(a, b)` in traversal order, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let m = if self.closed && n > 1 { n } else { n.saturating_sub(1) };
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn to_f64(&self) -> FPolyline {
        FPolyline {
            vertices: self.vertices.iter().map(|p| p.to_f64()).collect(),
            closed: self.closed,
        }
    }
}

/// A polyline with floating-point vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FPolyline {
    pub vertices: Vec<FPoint>,
    pub closed: bool,
}

impl FPolyline {
    pub fn edges(&self) -> impl Iterator<Item = (FPoint, FPoint)> + '_ {
        let n = self.vertices.len();
        let m = if self.closed && n > 1 { n } else { n.saturating_sub(1) };
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn scaled(&self, s: f64) -> FPolyline {
        FPolyline {
            vertices: self.vertices.iter().map(|p| p.scale(s)).collect(),
            closed: self.closed,
        }
    }
}

/// Convex hull vertices in counter-clockwise order, starting from the
/// lexicographically smallest point. Points interior to hull edges are dropped.
/// Degenerate inputs return 0, 1 or 2 points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    hull_impl(points, false)
}

/// Like [`convex_hull`] but keeps points lying on hull edges.
pub fn convex_hull_with_boundary(points: &[Point]) -> Vec<Point> {
    hull_impl(points, true)
}

fn hull_impl(points: &[Point], keep_collinear: bool) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let pop = |o: Orientation| {
        if keep_collinear {
            o == Orientation::Clockwise
        } else {
            o != Orientation::CounterClockwise
        }
    };
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && pop(orient(lower[lower.len() - 2], lower[lower.len() - 1], p)) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && pop(orient(upper[upper.len() - 2], upper[upper.len() - 1], p)) {
            upper.pop();
        }
        upper.push(p);
    }
    if keep_collinear && lower.len() == pts.len() && upper.len() == pts.len() {
        // All points collinear: the boundary walk goes out and back.
        return pts;
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
