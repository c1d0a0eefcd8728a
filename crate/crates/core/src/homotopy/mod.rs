//! Homotopy classes of P-curves via triangulation edge sequences.
//!
//! Curves are realised combinatorially: straight parts are nudged to their
//! left, and each visit becomes an arc around its obstacle that sweeps the
//! visit's winding angle. The reduced circular sequence of crossed
//! triangulation edges identifies the homotopy class.

mod sequence;
mod triangulation;

pub use sequence::{edge_sequence, equal_up_to_rotation, path_edge_sequence, reduce, reduce_linear};
pub use triangulation::{frame_points, EdgeId, SweepOrder, Triangulation};

use crate::error::HcsError;
use crate::geom::Point;
use crate::hcs::{PCurve, Visit};
use crate::obstacles::ObstacleSet;

/// Triangulates the obstacles in the bounding box of `points` (grown by one
/// lattice step) together with three enclosing frame points.
pub fn local_triangulation(points: &[Point], obs: &dyn ObstacleSet, order: SweepOrder) -> Result<Triangulation, HcsError> {
    let Some(first) = points.first() else {
        return Err(HcsError::EmptyCurve);
    };
    let mut lo = *first;
    let mut hi = *first;
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let lo = Point::new(lo.x - 1, lo.y - 1);
    let hi = Point::new(hi.x + 1, hi.y + 1);
    let inside = obs.points_in_box(lo, hi);
    Triangulation::build_with_extra(&inside, &frame_points(lo, hi), order)
}

/// Homotopy test for closed curves over the same obstacles.
pub fn homotopic(a: &PCurve, b: &PCurve, obs: &dyn ObstacleSet) -> Result<bool, HcsError> {
    homotopic_with(a, b, obs, SweepOrder::LEXICOGRAPHIC)
}

pub fn homotopic_with(a: &PCurve, b: &PCurve, obs: &dyn ObstacleSet, order: SweepOrder) -> Result<bool, HcsError> {
    let pts: Vec<Point> = a.points().chain(b.points()).collect();
    let t = local_triangulation(&pts, obs, order)?;
    let sa = reduce(&edge_sequence(a, &t)?);
    let sb = reduce(&edge_sequence(b, &t)?);
    Ok(equal_up_to_rotation(&sa, &sb))
}

/// Homotopy test for paths with common endpoints; the endpoint visits'
/// windings are ignored.
pub fn homotopic_paths(a: &[Visit], b: &[Visit], obs: &dyn ObstacleSet) -> Result<bool, HcsError> {
    if a.first().map(|v| v.point) != b.first().map(|v| v.point) || a.last().map(|v| v.point) != b.last().map(|v| v.point) {
        return Ok(false);
    }
    let pts: Vec<Point> = a.iter().chain(b).map(|v| v.point).collect();
    let t = local_triangulation(&pts, obs, SweepOrder::LEXICOGRAPHIC)?;
    Ok(path_edge_sequence(a, &t)? == path_edge_sequence(b, &t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstacles::{ExplicitObstacleSet, Scale};

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn square_with_centre() -> ExplicitObstacleSet {
        ExplicitObstacleSet::new(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1)], Scale::Exact(1)).unwrap()
    }

    #[test]
    fn loop_around_centre_crosses_the_four_spokes() {
        let obs = square_with_centre();
        let sq = PCurve::from_points(&[p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap();
        let t = local_triangulation(&sq.points().collect::<Vec<_>>(), &obs, SweepOrder::LEXICOGRAPHIC).unwrap();
        let red = reduce(&edge_sequence(&sq, &t).unwrap());
        assert_eq!(red.len(), 4);
        for &e in &red {
            let (a, b) = t.edge_ends(e);
            assert!(a == p(1, 1) || b == p(1, 1));
        }
        assert!(homotopic(&sq, &PCurve::point(p(1, 1), 1), &obs).unwrap());
        assert!(!homotopic(&sq, &PCurve::point(p(1, 1), -1), &obs).unwrap());
        assert!(!homotopic(&sq, &sq.reversed(), &obs).unwrap());
        assert!(homotopic(&sq.reversed(), &PCurve::point(p(1, 1), -1), &obs).unwrap());
    }

    #[test]
    fn tiny_loop_is_null() {
        let obs = square_with_centre();
        let tri = PCurve::from_points(&[p(0, 0), p(2, 0), p(1, 1)]).unwrap();
        assert!(homotopic(&tri, &PCurve::point(p(1, 1), 0), &obs).unwrap());
        assert!(!homotopic(&tri, &PCurve::point(p(1, 1), 1), &obs).unwrap());
    }

    #[test]
    fn rotation_of_the_visit_list_does_not_matter() {
        let obs = square_with_centre();
        let a = PCurve::from_points(&[p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap();
        let b = PCurve::from_points(&[p(2, 2), p(0, 2), p(0, 0), p(2, 0)]).unwrap();
        assert!(homotopic(&a, &b, &obs).unwrap());
    }
}
