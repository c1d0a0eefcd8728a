#![allow(dead_code)]

use hcs_core::geom::{convex_hull, Point};
use hcs_core::hcs::{PCurve, Visit};
use hcs_core::measure::is_simple;
use hcs_core::obstacles::{ExplicitObstacleSet, ObstacleSet, Region};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p(x: i64, y: i64) -> Point {
    Point::new(x, y)
}

pub fn grid_points(k: i64) -> Vec<Point> {
    (0..k).flat_map(|x| (0..k).map(move |y| p(x, y))).collect()
}

/// `n` random points in general position.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize) -> ExplicitObstacleSet {
    ExplicitObstacleSet::generate_random(Region::UNIT_SQUARE, n, rng.gen()).unwrap()
}

/// Closed curve through `k` random picks from `pool`, canonical over `obs`.
/// With `wind`, each visit gets up to one extra turn either way.
pub fn random_curve(rng: &mut ChaCha8Rng, pool: &[Point], k: usize, wind: bool, obs: &dyn ObstacleSet) -> Option<PCurve> {
    let mut vs: Vec<Visit> = Vec::new();
    for _ in 0..k {
        let q = pool[rng.gen_range(0..pool.len())];
        if vs.last().map(|v| v.point) != Some(q) {
            vs.push(Visit::new(q, 0));
        }
    }
    while vs.len() > 1 && vs[0].point == vs[vs.len() - 1].point {
        vs.pop();
    }
    if vs.len() < 3 {
        return None;
    }
    let c = PCurve::new(vs).ok()?.canonicalized(obs).with_principal_winding();
    if !wind {
        return Some(c);
    }
    let vs = c.visits().iter().map(|v| Visit::new(v.point, v.turns + rng.gen_range(-1..=1))).collect();
    PCurve::new(vs).ok()
}

/// Simple polygon through the given points, ordered by angle about their
/// centroid; `None` if that order does not give a simple curve.
pub fn star_polygon(points: &[Point], obs: &dyn ObstacleSet) -> Option<PCurve> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|q| q.x as f64).sum::<f64>() / n;
    let cy = points.iter().map(|q| q.y as f64).sum::<f64>() / n;
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        let ta = (a.y as f64 - cy).atan2(a.x as f64 - cx);
        let tb = (b.y as f64 - cy).atan2(b.x as f64 - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let c = PCurve::from_points(&pts).ok()?.canonicalized(obs).with_principal_winding();
    is_simple(&c).then_some(c)
}

/// Sample of `k` distinct points from `pool`.
pub fn sample(rng: &mut ChaCha8Rng, pool: &[Point], k: usize) -> Vec<Point> {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    for i in 0..k.min(pool.len()) {
        let j = rng.gen_range(i..idx.len());
        idx.swap(i, j);
    }
    idx[..k.min(pool.len())].iter().map(|&i| pool[i]).collect()
}

/// Counter-clockwise convex polygon on a random subset.
pub fn random_convex(rng: &mut ChaCha8Rng, pool: &[Point], k: usize, obs: &dyn ObstacleSet) -> Option<PCurve> {
    let hull = convex_hull(&sample(rng, pool, k));
    if hull.len() < 3 {
        return None;
    }
    Some(PCurve::from_points(&hull).ok()?.canonicalized(obs).with_principal_winding())
}
