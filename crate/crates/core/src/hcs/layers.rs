use crate::error::HcsError;
use crate::geom::{convex_hull, Point};
use crate::obstacles::ObstacleSet;

use super::pcurve::PCurve;

/// Onion peeling: repeatedly removes the hull vertices. Points inside hull
/// edges stay for a later layer.
pub fn convex_layers(points: &[Point]) -> Vec<Vec<Point>> {
    let mut rest: Vec<Point> = points.to_vec();
    rest.sort_unstable();
    rest.dedup();
    let mut layers = Vec::new();
    while !rest.is_empty() {
        let mut layer = convex_hull(&rest);
        layer.sort_unstable();
        rest.retain(|p| layer.binary_search(p).is_err());
        layers.push(layer);
    }
    layers
}

/// Counter-clockwise hull boundary of `points` as a canonical P-curve.
pub fn hull_boundary_curve(points: &[Point], obs: &dyn ObstacleSet) -> Result<PCurve, HcsError> {
    let hull = convex_hull(points);
    if hull.is_empty() {
        return Err(HcsError::NoObstacles);
    }
    if hull.len() == 1 {
        return Ok(PCurve::point(hull[0], 0));
    }
    Ok(PCurve::from_points(&hull)?.canonicalized(obs).with_principal_winding())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(k: i64) -> Vec<Point> {
        (0..k).flat_map(|x| (0..k).map(move |y| Point::new(x, y))).collect()
    }

    #[test]
    fn grid_layers() {
        let l3 = convex_layers(&grid(3));
        assert_eq!(l3.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 4, 1]);
        assert_eq!(l3[2], vec![Point::new(1, 1)]);
        let l4 = convex_layers(&grid(4));
        assert_eq!(l4.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 8, 4]);
    }

    #[test]
    fn convex_position_is_one_layer() {
        let pts = [Point::new(0, 0), Point::new(5, 1), Point::new(6, 6), Point::new(1, 4)];
        assert_eq!(convex_layers(&pts).len(), 1);
    }
}
