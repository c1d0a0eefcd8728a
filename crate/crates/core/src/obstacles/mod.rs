//! Point-obstacle sets.
//!
//! Two backends implement [`ObstacleSet`]: the implicit lattice
//! [`GridObstacleSet`] and the stored, quadtree-indexed
//! [`ExplicitObstacleSet`].

mod chain;
mod explicit;
mod grid;
mod quadtree;

use serde::{Deserialize, Serialize};

pub use chain::{brute_release_chain, near_chain};
pub use explicit::{ExplicitObstacleSet, Region};
pub use grid::{release_chain_grid_gcd, release_path_grid_gcd, GridObstacleSet};
pub use quadtree::QuadTree;

use crate::error::HcsError;
use crate::geom::{orient, Orientation, Point, RatPoint};

/// Number of lattice steps per world unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scale {
    Exact(i64),
    /// Irrational spacing such as `√(10⁵)` lattice steps per unit.
    Real(f64),
}

impl Scale {
    pub fn to_f64(self) -> f64 {
        match self {
            Scale::Exact(s) => s as f64,
            Scale::Real(s) => s,
        }
    }

    /// Maps the world point `(x / den, y / den)` to lattice coordinates.
    pub fn to_lattice(self, x: i64, y: i64, den: i64) -> RatPoint {
        match self {
            Scale::Exact(s) => RatPoint::new(x * s, y * s, den),
            Scale::Real(s) => {
                const FINE: i64 = 1 << 20;
                let f = |v: i64| (v as f64 / den as f64 * s * FINE as f64).round() as i64;
                RatPoint::new(f(x), f(y), FINE)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackendKind {
    Grid,
    Explicit,
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BackendKind::Grid => "grid",
            BackendKind::Explicit => "explicit",
        })
    }
}

/// A set of point obstacles with exact lattice coordinates.
pub trait ObstacleSet: Send + Sync {
    fn kind(&self) -> BackendKind;

    fn scale(&self) -> Scale;

    fn contains(&self, p: Point) -> bool;

    /// Closest obstacle to `q`; ties go to the lexicographically smallest point.
    fn nearest(&self, q: RatPoint) -> Option<Point>;

    /// All obstacles in the closed triangle `abc` (either orientation).
    fn points_in_closed_triangle(&self, a: Point, b: Point, c: Point) -> Vec<Point>;

    /// All obstacles in the closed box `[min.x, max.x] × [min.y, max.y]`.
    fn points_in_box(&self, min: Point, max: Point) -> Vec<Point>;

    /// Obstacles strictly inside segment `ab`, ordered from `a` to `b`.
    fn points_on_segment(&self, a: Point, b: Point) -> Vec<Point>;

    /// Hull vertices strictly between `u` and `w` replacing `v` on release.
    fn release_chain(&self, u: Point, v: Point, w: Point) -> Result<Vec<Point>, HcsError> {
        check_triangle(u, v, w)?;
        Ok(near_chain(u, v, w, self.points_in_closed_triangle(u, v, w), false))
    }

    /// Like [`ObstacleSet::release_chain`] but also keeps obstacles lying
    /// inside chain edges, so consecutive output points have no obstacle
    /// between them.
    fn release_path(&self, u: Point, v: Point, w: Point) -> Result<Vec<Point>, HcsError> {
        check_triangle(u, v, w)?;
        Ok(near_chain(u, v, w, self.points_in_closed_triangle(u, v, w), true))
    }
}

pub(crate) fn check_triangle(u: Point, v: Point, w: Point) -> Result<(), HcsError> {
    if orient(u, v, w) == Orientation::Collinear {
        return Err(HcsError::Collinear(u, v, w));
    }
    Ok(())
}

/// Lexicographically ordered bounding box of a triangle.
pub(crate) fn triangle_box(a: Point, b: Point, c: Point) -> (Point, Point) {
    (
        Point::new(a.x.min(b.x).min(c.x), a.y.min(b.y).min(c.y)),
        Point::new(a.x.max(b.x).max(c.x), a.y.max(b.y).max(c.y)),
    )
}

/// Exact closed-triangle membership, for either orientation of `abc`.
pub fn in_closed_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    let o1 = orient(a, b, p).signum();
    let o2 = orient(b, c, p).signum();
    let o3 = orient(c, a, p).signum();
    let has_neg = o1 < 0 || o2 < 0 || o3 < 0;
    let has_pos = o1 > 0 || o2 > 0 || o3 > 0;
    !(has_neg && has_pos)
}
