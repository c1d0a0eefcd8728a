//! Closed curves through obstacle points, with a signed winding angle at each visit.
//!
//! The winding angle `α` at a visit `v` with neighbours `u` (previous) and `w`
//! (next) is the signed angle swept around `v` going from the direction of `u`
//! to the direction of `w`, counter-clockwise positive. It is stored as
//! `α = θ + 2π·turns`, where `θ ∈ [0, 2π)` is the counter-clockwise angle from
//! `u − v` to `w − v`. `θ` is never stored: its class is recomputed exactly from
//! the neighbours, so every decision (nailed, unstable, sign) is exact.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::HcsError;
use crate::geom::{ccw_angle, ccw_angle_cmp, cross, dot, Point, Polyline};
use crate::obstacles::ObstacleSet;

/// Exact class of the principal angle `θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaClass {
    /// `θ = 0`: the curve leaves along the direction it came from.
    Zero,
    /// `0 < θ < π`.
    BelowPi,
    /// `θ = π`: straight through.
    Pi,
    /// `π < θ < 2π`.
    AbovePi,
}

impl ThetaClass {
    pub fn of(d_in: Point, d_out: Point) -> ThetaClass {
        match cross(d_in, d_out).cmp(&0) {
            Ordering::Greater => ThetaClass::BelowPi,
            Ordering::Less => ThetaClass::AbovePi,
            Ordering::Equal => {
                if dot(d_in, d_out) > 0 {
                    ThetaClass::Zero
                } else {
                    ThetaClass::Pi
                }
            }
        }
    }
}

/// A winding angle in exact form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Winding {
    pub class: ThetaClass,
    pub turns: i64,
}

impl Winding {
    /// Winding of the short way around: `|α| < π` for turns and U-turns, `+π`
    /// for straight-through visits.
    pub fn principal(class: ThetaClass) -> Winding {
        let turns = if class == ThetaClass::AbovePi { -1 } else { 0 };
        Winding { class, turns }
    }

    /// `|α| < π`.
    pub fn is_unstable(self) -> bool {
        match self.class {
            ThetaClass::Zero | ThetaClass::BelowPi => self.turns == 0,
            ThetaClass::AbovePi => self.turns == -1,
            ThetaClass::Pi => false,
        }
    }

    /// `α ≡ π (mod 2π)`.
    pub fn is_nailed(self) -> bool {
        self.class == ThetaClass::Pi
    }

    /// Sign of `α` (0 only for `α = 0`).
    pub fn signum(self) -> i32 {
        if self.turns > 0 {
            1
        } else if self.turns < 0 {
            -1
        } else if self.class == ThetaClass::Zero {
            0
        } else {
            1
        }
    }

    /// Turn count of `−α`, whose class is the mirror of this one.
    pub fn negated(self) -> Winding {
        match self.class {
            ThetaClass::Zero => Winding { class: ThetaClass::Zero, turns: -self.turns },
            ThetaClass::Pi => Winding { class: ThetaClass::Pi, turns: -self.turns - 1 },
            ThetaClass::BelowPi => Winding { class: ThetaClass::AbovePi, turns: -self.turns - 1 },
            ThetaClass::AbovePi => Winding { class: ThetaClass::BelowPi, turns: -self.turns - 1 },
        }
    }

    /// `α` in radians, given the principal angle `θ`.
    pub fn radians(self, theta: f64) -> f64 {
        let theta = match self.class {
            ThetaClass::Zero => 0.0,
            ThetaClass::Pi => PI,
            _ => theta,
        };
        theta + TAU * self.turns as f64
    }
}

/// Turn count after the outgoing direction of a visit rotates from `old_out` to
/// `new_out` by less than a half turn; `d_in` is the (fixed) incoming direction.
pub(crate) fn rotate_out(turns: i64, d_in: Point, old_out: Point, new_out: Point) -> i64 {
    let s = cross(old_out, new_out);
    debug_assert!(s != 0 || dot(old_out, new_out) > 0, "rotation must be less than a half turn");
    match s.cmp(&0) {
        Ordering::Greater if ccw_angle_cmp(d_in, new_out, old_out) == Ordering::Less => turns + 1,
        Ordering::Less if ccw_angle_cmp(d_in, new_out, old_out) == Ordering::Greater => turns - 1,
        _ => turns,
    }
}

/// Turn count after the incoming direction rotates from `old_in` to `new_in`;
/// `d_out` is fixed. Computed on the reversed sweep.
pub(crate) fn rotate_in(turns: i64, old_in: Point, new_in: Point, d_out: Point) -> i64 {
    let rev = Winding { class: ThetaClass::of(old_in, d_out), turns }.negated();
    let rev_turns = rotate_out(rev.turns, d_out, old_in, new_in);
    Winding { class: ThetaClass::of(d_out, new_in), turns: rev_turns }.negated().turns
}

/// Turn count of `α₁ + α₂` where `α₁` sweeps `d1 → d2` and `α₂` sweeps `d2 → d3`.
pub(crate) fn add_sweeps(t1: i64, t2: i64, d1: Point, d2: Point, d3: Point) -> i64 {
    let wrap = ccw_angle_cmp(d1, d3, d2) == Ordering::Less;
    t1 + t2 + wrap as i64
}

/// One obstacle visit: the obstacle and the winding turn count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub point: Point,
    pub turns: i64,
}

impl Visit {
    pub fn new(point: Point, turns: i64) -> Self {
        Visit { point, turns }
    }
}

/// A closed P-curve: circular sequence of obstacle visits with winding angles.
///
/// A single visit denotes a curve collapsed to a point; its `turns` is the
/// total winding around that point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PCurve {
    visits: Vec<Visit>,
}

impl PCurve {
    /// Builds a curve from visits; consecutive visits must be distinct points.
    pub fn new(visits: Vec<Visit>) -> Result<Self, HcsError> {
        if visits.is_empty() {
            return Err(HcsError::EmptyCurve);
        }
        let n = visits.len();
        if n > 1 {
            for i in 0..n {
                if visits[i].point == visits[(i + 1) % n].point {
                    return Err(HcsError::RepeatedConsecutiveVisit(visits[i].point));
                }
            }
        }
        Ok(PCurve { visits })
    }

    pub(crate) fn from_visits_unchecked(visits: Vec<Visit>) -> Self {
        debug_assert!(!visits.is_empty());
        PCurve { visits }
    }

    /// Point curve with the given total winding.
    pub fn point(p: Point, turns: i64) -> Self {
        PCurve { visits: vec![Visit::new(p, turns)] }
    }

    /// Curve through `points` with principal windings everywhere.
    pub fn from_points(points: &[Point]) -> Result<Self, HcsError> {
        let visits = points.iter().map(|&p| Visit::new(p, 0)).collect();
        Ok(PCurve::new(visits)?.with_principal_winding())
    }

    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    pub fn is_collapsed(&self) -> bool {
        self.visits.len() == 1
    }

    /// Point curve with zero winding (contractible collapse).
    pub fn is_null_point(&self) -> bool {
        self.is_collapsed() && self.visits[0].turns == 0
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.visits.iter().map(|v| v.point)
    }

    fn neighbours(&self, i: usize) -> (Point, Point) {
        let n = self.visits.len();
        (self.visits[(i + n - 1) % n].point, self.visits[(i + 1) % n].point)
    }

    /// Exact winding at visit `i`.
    pub fn winding(&self, i: usize) -> Winding {
        let v = self.visits[i];
        if self.visits.len() == 1 {
            return Winding { class: ThetaClass::Zero, turns: v.turns };
        }
        let (u, w) = self.neighbours(i);
        Winding { class: ThetaClass::of(u - v.point, w - v.point), turns: v.turns }
    }

    /// Winding angle `α` at visit `i`, in radians.
    pub fn alpha(&self, i: usize) -> f64 {
        let v = self.visits[i].point;
        let wnd = self.winding(i);
        if self.visits.len() == 1 {
            return wnd.radians(0.0);
        }
        let (u, w) = self.neighbours(i);
        wnd.radians(ccw_angle(u - v, w - v))
    }

    pub fn is_nailed(&self, i: usize) -> bool {
        self.visits.len() > 1 && self.winding(i).is_nailed()
    }

    pub fn is_unstable(&self, i: usize) -> bool {
        self.visits.len() > 1 && self.winding(i).is_unstable()
    }

    /// Euclidean length in lattice units.
    pub fn length(&self) -> f64 {
        let n = self.visits.len();
        if n < 2 {
            return 0.0;
        }
        (0..n).map(|i| self.visits[i].point.dist(self.visits[(i + 1) % n].point)).sum()
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::closed(self.points().collect())
    }

    /// Same geometry, every visit given the short-way winding. This is the
    /// combinatorial form of cutting each corner by an infinitesimal shortcut.
    pub fn with_principal_winding(&self) -> PCurve {
        if self.visits.len() == 1 {
            return self.clone();
        }
        let visits = (0..self.visits.len())
            .map(|i| Visit::new(self.visits[i].point, Winding::principal(self.winding(i).class).turns))
            .collect();
        PCurve { visits }
    }

    /// Traverses the curve in the opposite direction (negates all windings).
    pub fn reversed(&self) -> PCurve {
        let n = self.visits.len();
        let mut visits: Vec<Visit> = (0..n)
            .map(|i| Visit::new(self.visits[i].point, self.winding(i).negated().turns))
            .collect();
        visits.reverse();
        PCurve { visits }
    }

    /// Image under the integer affine map `p ↦ M·p + t`, `M = [[a, b], [c, d]]`.
    /// Orientation-reversing maps negate every winding.
    pub fn transformed(&self, m: [[i64; 2]; 2], t: Point) -> PCurve {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        assert!(det != 0, "degenerate affine map");
        let map = |p: Point| Point::new(m[0][0] * p.x + m[0][1] * p.y + t.x, m[1][0] * p.x + m[1][1] * p.y + t.y);
        let visits = (0..self.visits.len())
            .map(|i| {
                let turns = if det > 0 { self.visits[i].turns } else { self.winding(i).negated().turns };
                Visit::new(map(self.visits[i].point), turns)
            })
            .collect();
        PCurve { visits }
    }

    /// Equality as circular sequences (any starting visit). All contractible
    /// point curves compare equal regardless of where they sit.
    pub fn same_cycle(&self, other: &PCurve) -> bool {
        if self.is_null_point() && other.is_null_point() {
            return true;
        }
        let n = self.visits.len();
        if n != other.visits.len() {
            return false;
        }
        (0..n).any(|s| (0..n).all(|i| self.visits[(s + i) % n] == other.visits[i]))
    }

    /// True when every consecutive pair is distinct and no obstacle lies in the
    /// interior of an edge.
    pub fn is_canonical(&self, obs: &dyn ObstacleSet) -> bool {
        let n = self.visits.len();
        if n == 1 {
            return obs.contains(self.visits[0].point);
        }
        (0..n).all(|i| {
            let a = self.visits[i].point;
            let b = self.visits[(i + 1) % n].point;
            obs.contains(a) && a != b && obs.points_on_segment(a, b).is_empty()
        })
    }

    /// Inserts every obstacle lying inside an edge as a straight-through visit
    /// (winding `+π`). Existing windings are kept.
    pub fn canonicalized(&self, obs: &dyn ObstacleSet) -> PCurve {
        let n = self.visits.len();
        if n == 1 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.visits[i];
            let b = self.visits[(i + 1) % n].point;
            out.push(a);
            for p in obs.points_on_segment(a.point, b) {
                out.push(Visit::new(p, 0));
            }
        }
        PCurve { visits: out }
    }
}
