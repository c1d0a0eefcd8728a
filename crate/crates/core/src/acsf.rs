//! Front-tracking affine curve-shortening flow.
//!
//! Every sample moves toward the centre of the circle through it and its two
//! neighbours with speed `r^(-1/3)`. A small tangential component pushes each
//! sample away from its nearer neighbour so spacing stays even.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::HcsError;
use crate::geom::{FPoint, FPolyline};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcsfParams {
    /// Number of samples.
    pub m: usize,
    /// Step coefficient: `dt = max(c · d_min^(4/3), t_min)`.
    pub c: f64,
    /// Lower clamp on the time step.
    pub t_min: f64,
    /// Cap on the tangential speed as a fraction of the normal speed.
    pub tangential_cap: f64,
}

impl Default for AcsfParams {
    fn default() -> Self {
        AcsfParams { m: 1000, c: 3e-4, t_min: 3e-9, tangential_cap: 0.5 }
    }
}

/// Samples closer than this to a neighbour mark the step as near-singular.
pub const SINGULAR_SPACING: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct AcsfState {
    points: Vec<FPoint>,
    t: f64,
    params: AcsfParams,
    singular_steps: usize,
}

/// Circle through three consecutive samples, seen from the middle one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureCircle {
    /// Unit vector from the middle point toward the centre. For collinear
    /// points this is the left normal of the chord.
    pub normal: FPoint,
    /// Infinite for collinear points.
    pub radius: f64,
}

pub fn curvature_circle(a: FPoint, p: FPoint, b: FPoint) -> Result<CurvatureCircle, HcsError> {
    if a == p || p == b || a == b {
        return Err(HcsError::CoincidentPoints);
    }
    let u = a - p;
    let v = b - p;
    let d = 2.0 * u.cross(v);
    let (uu, vv) = (u.dot(u), v.dot(v));
    let chord = b - a;
    if d == 0.0 || !d.is_finite() {
        let n = FPoint::new(-chord.y, chord.x).scale(1.0 / chord.norm());
        return Ok(CurvatureCircle { normal: n, radius: f64::INFINITY });
    }
    // Centre relative to p.
    let cx = (v.y * uu - u.y * vv) / d;
    let cy = (u.x * vv - v.x * uu) / d;
    let c = FPoint::new(cx, cy);
    let r = c.norm();
    Ok(CurvatureCircle { normal: c.scale(1.0 / r), radius: r })
}

/// `x^(-1/3)` for positive `x`: exponent-halving seed, then Newton steps.
#[inline]
fn inv_cbrt(x: f64) -> f64 {
    let mut y = f64::from_bits(0x553e_f0ff_289d_d796 - x.to_bits() / 3);
    for _ in 0..4 {
        y = y * (4.0 - x * y * y * y) * (1.0 / 3.0);
    }
    y
}

/// `m` points spaced uniformly by arc length along a closed polyline,
/// starting at its first vertex.
pub fn resample(curve: &FPolyline, m: usize) -> Result<Vec<FPoint>, HcsError> {
    let total = closed_length(&curve.vertices);
    if curve.vertices.len() < 2 || total <= 0.0 || !total.is_finite() {
        return Err(HcsError::ZeroLength);
    }
    if m < 3 {
        return Err(HcsError::TooFewPoints { needed: 3, got: m });
    }
    let n = curve.vertices.len();
    let step = total / m as f64;
    let mut out = Vec::with_capacity(m);
    let mut edge = 0;
    let mut start = 0.0;
    for k in 0..m {
        let s = k as f64 * step;
        loop {
            let (a, b) = (curve.vertices[edge], curve.vertices[(edge + 1) % n]);
            let len = a.dist(b);
            if s <= start + len || edge + 1 == n {
                let f = if len > 0.0 { ((s - start) / len).clamp(0.0, 1.0) } else { 0.0 };
                out.push(a + (b - a).scale(f));
                break;
            }
            start += len;
            edge += 1;
        }
    }
    Ok(out)
}

fn closed_length(pts: &[FPoint]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].dist(pts[(i + 1) % n])).sum()
}

/// Result of [`AcsfState::run_to_length_fraction`].
#[derive(Clone, Debug)]
pub struct AcsfOutcome {
    pub curve: FPolyline,
    pub t: f64,
    pub steps: usize,
    /// The curve degenerated (length or spacing vanished) before reaching
    /// the target.
    pub collapsed: bool,
    /// Steps taken while two neighbours were closer than [`SINGULAR_SPACING`].
    pub singular_steps: usize,
}

impl AcsfState {
    pub fn init(curve: &FPolyline, params: AcsfParams) -> Result<Self, HcsError> {
        Ok(AcsfState { points: resample(curve, params.m)?, t: 0.0, params, singular_steps: 0 })
    }

    pub fn points(&self) -> &[FPoint] {
        &self.points
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn params(&self) -> AcsfParams {
        self.params
    }

    pub fn singular_steps(&self) -> usize {
        self.singular_steps
    }

    pub fn length(&self) -> f64 {
        closed_length(&self.points)
    }

    pub fn polyline(&self) -> FPolyline {
        FPolyline { vertices: self.points.clone(), closed: true }
    }

    /// Moves all samples simultaneously by one time step; returns the step.
    pub fn step(&mut self) -> Result<f64, HcsError> {
        let n = self.points.len();
        // gaps[i] = |p[i+1] − p[i]|
        let gaps: Vec<f64> = (0..n).map(|i| self.points[i].dist(self.points[(i + 1) % n])).collect();
        let d_min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        if d_min == 0.0 {
            return Err(HcsError::CoincidentPoints);
        }
        if d_min < SINGULAR_SPACING {
            self.singular_steps += 1;
        }
        let dt = (self.params.c * d_min * d_min.cbrt()).max(self.params.t_min);
        let cap = self.params.tangential_cap;
        let pts = &self.points;
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let a = pts[if i == 0 { n - 1 } else { i - 1 }];
            let p = pts[i];
            let b = pts[if i + 1 == n { 0 } else { i + 1 }];
            let (da, db) = (gaps[if i == 0 { n - 1 } else { i - 1 }], gaps[i]);
            let (u, w) = (a - p, b - p);
            let d = 2.0 * u.cross(w);
            // Centre relative to p is `c`; velocity toward it is c / r^(4/3).
            let (normal, speed) = if d != 0.0 {
                let (uu, ww) = (u.dot(u), w.dot(w));
                let c = FPoint::new((w.y * uu - u.y * ww) / d, (u.x * ww - w.x * uu) / d);
                let y = inv_cbrt(c.dot(c));
                (c.scale(y * y), y.sqrt())
            } else {
                (FPoint::new(0.0, 0.0), 0.0)
            };
            let ratio = ((da - db).abs() / (da + db)).min(cap);
            let chord = b - a;
            // Away from the nearer neighbour: toward b when a is closer.
            let sign = if da < db { 1.0 } else { -1.0 };
            let v = normal + chord.scale(sign * ratio * speed / chord.norm());
            let q = p + v.scale(dt);
            if !q.x.is_finite() || !q.y.is_finite() {
                return Err(HcsError::NonFinite { t: self.t });
            }
            next.push(q);
        }
        self.points = next;
        self.t += dt;
        Ok(dt)
    }

    /// Steps until the length is at most `f` times the initial length.
    pub fn run_to_length_fraction(&mut self, f: f64) -> Result<AcsfOutcome, HcsError> {
        self.run_until(|s, l0| s.length() <= f * l0)
    }

    /// Steps until the flow time reaches `t_end`.
    pub fn run_to_time(&mut self, t_end: f64) -> Result<AcsfOutcome, HcsError> {
        if t_end <= 0.0 {
            return Err(HcsError::NonPositiveTime);
        }
        self.run_until(|s, _| s.t >= t_end)
    }

    fn run_until(&mut self, mut done: impl FnMut(&AcsfState, f64) -> bool) -> Result<AcsfOutcome, HcsError> {
        let l0 = self.length();
        let mut steps = 0;
        let mut collapsed = false;
        while !done(self, l0) {
            match self.step() {
                Ok(_) => steps += 1,
                Err(HcsError::CoincidentPoints) => {
                    collapsed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(AcsfOutcome { curve: self.polyline(), t: self.t, steps, collapsed, singular_steps: self.singular_steps })
    }

    /// Appends one `t,x,y` row per sample.
    pub fn write_csv_rows(&self, out: &mut String) {
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", self.t, p.x, p.y);
        }
    }
}

/// Radius of a circle of initial radius `r0` under the flow at time `t`.
pub fn circle_radius(r0: f64, t: f64) -> f64 {
    (r0.powf(4.0 / 3.0) - 4.0 * t / 3.0).max(0.0).powf(0.75)
}

/// Regular `n`-gon inscribed in the circle of radius `r` about the origin.
pub fn circle_polyline(r: f64, n: usize) -> FPolyline {
    let vertices = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            FPoint::new(r * a.cos(), r * a.sin())
        })
        .collect();
    FPolyline { vertices, closed: true }
}
