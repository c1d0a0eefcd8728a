use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HcsError;
use crate::geom::{in_segment_interior, Point, RatPoint};

use super::{in_closed_triangle, BackendKind, ObstacleSet, QuadTree, Scale};

/// Lattice steps per world unit for randomly generated sets.
pub const RANDOM_LATTICE: i64 = 1 << 20;

const INDEX_THRESHOLD: usize = 64;
const EXHAUSTIVE_COLLINEARITY_LIMIT: usize = 1000;
const SAMPLED_TRIPLES: usize = 200_000;

/// Axis-aligned box in world units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Region {
    pub const UNIT_SQUARE: Region = Region { x0: 0, y0: 0, x1: 1, y1: 1 };
}

/// A finite stored obstacle set.
#[derive(Clone, Debug)]
pub struct ExplicitObstacleSet {
    points: Vec<Point>,
    members: HashSet<Point>,
    index: Option<QuadTree>,
    scale: Scale,
    origin: Option<(Region, u64)>,
}

impl ExplicitObstacleSet {
    pub fn new(points: Vec<Point>, scale: Scale) -> Result<Self, HcsError> {
        if points.is_empty() {
            return Err(HcsError::NoObstacles);
        }
        let mut members = HashSet::with_capacity(points.len());
        for &p in &points {
            if !members.insert(p) {
                return Err(HcsError::DuplicateObstacle(p));
            }
        }
        let index = (points.len() >= INDEX_THRESHOLD).then(|| QuadTree::build(&points));
        Ok(ExplicitObstacleSet { points, members, index, scale, origin: None })
    }

    /// `count` points drawn uniformly from the `2^20`-per-unit lattice of
    /// `region`, without duplicates and with collinear triples resampled.
    pub fn generate_random(region: Region, count: usize, seed: u64) -> Result<Self, HcsError> {
        if region.x1 <= region.x0 || region.y1 <= region.y0 {
            return Err(HcsError::DegenerateRegion);
        }
        if count < 3 {
            return Err(HcsError::TooFewPoints { needed: 3, got: count });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = (region.x0 * RANDOM_LATTICE, region.x1 * RANDOM_LATTICE);
        let ys = (region.y0 * RANDOM_LATTICE, region.y1 * RANDOM_LATTICE);
        let draw = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(xs.0..xs.1), rng.gen_range(ys.0..ys.1));
        let mut seen = HashSet::with_capacity(count);
        let mut points = Vec::with_capacity(count);
        while points.len() < count {
            let p = draw(&mut rng);
            if seen.insert(p) {
                points.push(p);
            }
        }
        while let Some(k) = find_collinear(&points, &mut rng) {
            seen.remove(&points[k]);
            loop {
                let p = draw(&mut rng);
                if seen.insert(p) {
                    points[k] = p;
                    break;
                }
            }
        }
        let mut set = ExplicitObstacleSet::new(points, Scale::Exact(RANDOM_LATTICE))?;
        set.origin = Some((region, seed));
        Ok(set)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Region and seed when the set was randomly generated.
    pub fn origin(&self) -> Option<(Region, u64)> {
        self.origin
    }

    /// Text form: a `scale <den>` header then one `x y` line per point.
    pub fn to_text(&self) -> String {
        let den = match self.scale {
            Scale::Exact(s) => s.to_string(),
            Scale::Real(s) => format!("{s:?}"),
        };
        let mut s = format!("scale {den}\n");
        for p in &self.points {
            s.push_str(&format!("{} {}\n", p.x, p.y));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, HcsError> {
        let mut scale = None;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| HcsError::Parse { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            if scale.is_none() {
                if it.next() != Some("scale") {
                    return Err(err("expected `scale <den>` header"));
                }
                let v = it.next().ok_or_else(|| err("missing scale"))?;
                scale = Some(match v.parse::<i64>() {
                    Ok(d) if d > 0 => Scale::Exact(d),
                    _ => Scale::Real(v.parse::<f64>().ok().filter(|s| *s > 0.0).ok_or_else(|| err("bad scale"))?),
                });
                continue;
            }
            let mut coord = || -> Result<i64, HcsError> {
                it.next().ok_or_else(|| err("missing coordinate"))?.parse().map_err(|_| err("bad coordinate"))
            };
            let p = Point::new(coord()?, coord()?);
            if it.next().is_some() {
                return Err(err("trailing data"));
            }
            points.push(p);
        }
        ExplicitObstacleSet::new(points, scale.ok_or(HcsError::Parse { line: 0, msg: "empty input".into() })?)
    }
}

fn primitive_direction(d: Point) -> (i64, i64) {
    let (mut a, mut b) = (d.x.abs(), d.y.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let (x, y) = (d.x / a, d.y / a);
    if x < 0 || (x == 0 && y < 0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

/// Index of a point belonging to some collinear triple, if one is found.
/// Exhaustive for small sets, sampled above that.
fn find_collinear(points: &[Point], rng: &mut ChaCha8Rng) -> Option<usize> {
    let n = points.len();
    if n <= EXHAUSTIVE_COLLINEARITY_LIMIT {
        let mut dirs = HashMap::with_capacity(n);
        for i in 0..n {
            dirs.clear();
            for j in i + 1..n {
                if dirs.insert(primitive_direction(points[j] - points[i]), j).is_some() {
                    return Some(j);
                }
            }
        }
        return None;
    }
    (0..SAMPLED_TRIPLES).find_map(|_| {
        let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        (i != j && j != k && i != k && crate::geom::orient(points[i], points[j], points[k]) == crate::geom::Orientation::Collinear)
            .then_some(k)
    })
}

impl ObstacleSet for ExplicitObstacleSet {
    fn kind(&self) -> BackendKind {
        BackendKind::Explicit
    }

    fn scale(&self) -> Scale {
        self.scale
    }

    fn contains(&self, p: Point) -> bool {
        self.members.contains(&p)
    }

    fn nearest(&self, q: RatPoint) -> Option<Point> {
        match &self.index {
            Some(t) => t.nearest(q),
            None => self.points.iter().map(|&p| (q.dist_sq_scaled(p), p)).min().map(|(_, p)| p),
        }
    }

    fn points_in_closed_triangle(&self, a: Point, b: Point, c: Point) -> Vec<Point> {
        match &self.index {
            Some(t) => {
                let mut out = Vec::new();
                t.points_in_closed_triangle(a, b, c, &mut out);
                out
            }
            None => self.points.iter().copied().filter(|&p| in_closed_triangle(a, b, c, p)).collect(),
        }
    }

    fn points_in_box(&self, min: Point, max: Point) -> Vec<Point> {
        match &self.index {
            Some(t) => {
                let mut out = Vec::new();
                t.points_in_box(min, max, &mut out);
                out
            }
            None => self
                .points
                .iter()
                .copied()
                .filter(|p| p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y)
                .collect(),
        }
    }

    fn points_on_segment(&self, a: Point, b: Point) -> Vec<Point> {
        let lo = Point::new(a.x.min(b.x), a.y.min(b.y));
        let hi = Point::new(a.x.max(b.x), a.y.max(b.y));
        let mut out: Vec<Point> = self.points_in_box(lo, hi).into_iter().filter(|&p| in_segment_interior(a, b, p)).collect();
        out.sort_by_key(|p| (*p - a).norm_sq());
        out
    }
}
