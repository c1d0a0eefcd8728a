use crate::error::HcsError;
use crate::geom::{cross, orient, Orientation, Point, RatPoint};

use super::{check_triangle, in_closed_triangle, triangle_box, BackendKind, ObstacleSet, Scale};

/// Every lattice point is an obstacle. Nothing is stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridObstacleSet {
    scale: Scale,
}

impl GridObstacleSet {
    pub fn new(scale: Scale) -> Self {
        GridObstacleSet { scale }
    }

    /// The `√N × √N` grid on the unit square (spacing `1/√N`).
    pub fn unit_square(n: u64) -> Self {
        let r = (n as f64).sqrt();
        let s = r.round() as i64;
        if (s as u64) * (s as u64) == n {
            GridObstacleSet::new(Scale::Exact(s))
        } else {
            GridObstacleSet::new(Scale::Real(r))
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Full release chain on the lattice (hull vertices and lattice points on
/// chain edges), walking from `u` to `w`. Lattice points on the legs `vu` and
/// `vw` come first and last; between them consecutive points `z_i, z_{i+1}`
/// span a triangle of area 1/2 with `v`.
pub fn release_path_grid_gcd(u: Point, v: Point, w: Point) -> Result<Vec<Point>, HcsError> {
    check_triangle(u, v, w)?;
    let (gu, gw) = (gcd(u.x - v.x, u.y - v.y), gcd(w.x - v.x, w.y - v.y));
    let du = Point::new((u.x - v.x) / gu, (u.y - v.y) / gu);
    let dw = Point::new((w.x - v.x) / gw, (w.y - v.y) / gw);
    let at = |d: Point, k: i64| Point::new(v.x + k * d.x, v.y + k * d.y);
    let mut out: Vec<Point> = (1..gu).rev().map(|k| at(du, k)).collect();
    primitive_walk(at(du, 1), v, at(dw, 1), &mut out)?;
    out.extend((1..gw).map(|k| at(dw, k)));
    Ok(out)
}

/// Walks the chain of the triangle `uvw` whose legs `v − u`, `w − v` are
/// primitive, pushing the points strictly between `u` and `w`.
fn primitive_walk(u: Point, v: Point, w: Point, out: &mut Vec<Point>) -> Result<(), HcsError> {
    let s: i128 = if cross(u - v, w - v) > 0 { 1 } else { -1 };
    // Edges of the triangle, oriented so the interior is on the left.
    let tri = if orient(u, v, w) == Orientation::CounterClockwise { [u, v, w] } else { [u, w, v] };
    let edges = [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])];
    let area2 = cross(u - v, w - v).unsigned_abs();
    let mut z = u;
    for _ in 0..=area2 {
        let a = z - v;
        let (ax, ay) = (a.x as i128, a.y as i128);
        // ax·dy − ay·dx = s
        let (g, x, y) = ext_gcd(ax, -ay);
        debug_assert_eq!(g, 1);
        let (d0x, d0y) = (y * s, x * s);
        let (px, py) = (v.x as i128 + d0x, v.y as i128 + d0y);
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for &(ea, eb) in &edges {
            let ex = (eb.x - ea.x) as i128;
            let ey = (eb.y - ea.y) as i128;
            let c0 = ex * (py - ea.y as i128) - ey * (px - ea.x as i128);
            let c1 = ex * ay - ey * ax;
            if c1 > 0 {
                lo = lo.max(div_ceil(-c0, c1));
            } else if c1 < 0 {
                hi = hi.min(div_floor(c0, -c1));
            } else if c0 < 0 {
                lo = i128::MAX;
            }
        }
        if lo > hi || lo == i128::MIN {
            return Err(HcsError::Collinear(u, v, w));
        }
        let next = Point::new((px + lo * ax) as i64, (py + lo * ay) as i64);
        if next == w {
            return Ok(());
        }
        out.push(next);
        z = next;
    }
    unreachable!("lattice walk did not reach w");
}

/// Hull vertices of the lattice release chain, via the gcd walk.
pub fn release_chain_grid_gcd(u: Point, v: Point, w: Point) -> Result<Vec<Point>, HcsError> {
    let path = release_path_grid_gcd(u, v, w)?;
    let mut full = Vec::with_capacity(path.len() + 2);
    full.push(u);
    full.extend(path);
    full.push(w);
    Ok((1..full.len() - 1)
        .filter(|&i| orient(full[i - 1], full[i], full[i + 1]) != Orientation::Collinear)
        .map(|i| full[i])
        .collect())
}

impl ObstacleSet for GridObstacleSet {
    fn kind(&self) -> BackendKind {
        BackendKind::Grid
    }

    fn scale(&self) -> Scale {
        self.scale
    }

    fn contains(&self, _p: Point) -> bool {
        true
    }

    fn nearest(&self, q: RatPoint) -> Option<Point> {
        // Round half down in each coordinate: n = ⌈(2x − d) / 2d⌉.
        let round = |x: i64| div_ceil(2 * x as i128 - q.den as i128, 2 * q.den as i128) as i64;
        Some(Point::new(round(q.x), round(q.y)))
    }

    fn points_in_closed_triangle(&self, a: Point, b: Point, c: Point) -> Vec<Point> {
        let (lo, hi) = triangle_box(a, b, c);
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = Point::new(x, y);
                if in_closed_triangle(a, b, c, p) {
                    out.push(p);
                }
            }
        }
        out
    }

    fn points_in_box(&self, min: Point, max: Point) -> Vec<Point> {
        (min.x..=max.x).flat_map(|x| (min.y..=max.y).map(move |y| Point::new(x, y))).collect()
    }

    fn points_on_segment(&self, a: Point, b: Point) -> Vec<Point> {
        let d = b - a;
        let g = gcd(d.x, d.y);
        if g <= 1 {
            return Vec::new();
        }
        let step = Point::new(d.x / g, d.y / g);
        (1..g).map(|i| Point::new(a.x + i * step.x, a.y + i * step.y)).collect()
    }

    fn release_path(&self, u: Point, v: Point, w: Point) -> Result<Vec<Point>, HcsError> {
        release_path_grid_gcd(u, v, w)
    }
}
