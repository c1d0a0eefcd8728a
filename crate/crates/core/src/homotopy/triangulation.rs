use std::collections::HashMap;

use crate::error::HcsError;
use crate::geom::{orient, Orientation, Point};

/// Identifier of a triangulation edge.
pub type EdgeId = usize;

/// Direction of the sweep that orders insertions. Points are inserted by
/// increasing `a·x + b·y`, ties by increasing `a·y − b·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOrder {
    pub a: i64,
    pub b: i64,
}

impl SweepOrder {
    pub const LEXICOGRAPHIC: SweepOrder = SweepOrder { a: 1, b: 0 };

    fn key(self, p: Point) -> (i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        let (x, y) = (p.x as i128, p.y as i128);
        (a * x + b * y, a * y - b * x)
    }
}

impl Default for SweepOrder {
    fn default() -> Self {
        SweepOrder::LEXICOGRAPHIC
    }
}

/// Triangulation of a planar point set, built by an incremental sweep.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    triangles: Vec<[usize; 3]>,
    edges: HashMap<(usize, usize), EdgeId>,
    edge_ends: Vec<(usize, usize)>,
    neighbours: Vec<Vec<usize>>,
}

impl Triangulation {
    /// Triangulates `points` (duplicates ignored). Fails when fewer than three
    /// distinct points are given or all are collinear.
    pub fn build(points: &[Point], order: SweepOrder) -> Result<Self, HcsError> {
        Self::build_with_extra(points, &[], order)
    }

    /// Triangulates `points`, then adds each of `extra` as a point outside
    /// the current hull.
    pub fn build_with_extra(points: &[Point], extra: &[Point], order: SweepOrder) -> Result<Self, HcsError> {
        let mut sorted: Vec<Point> = points.to_vec();
        sorted.sort_by_key(|&p| order.key(p));
        sorted.dedup();
        sorted.extend(extra.iter().copied().filter(|p| !points.contains(p)));
        if sorted.len() < 3 {
            return Err(HcsError::TooFewPoints { needed: 3, got: sorted.len() });
        }
        let mut t = Triangulation {
            index: sorted.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
            points: sorted,
            triangles: Vec::new(),
            edges: HashMap::new(),
            edge_ends: Vec::new(),
            neighbours: Vec::new(),
        };
        let n = t.points.len();
        t.neighbours = vec![Vec::new(); n];
        let pts = t.points.clone();

        let mut k = 2;
        while k < n && orient(pts[0], pts[1], pts[k]) == Orientation::Collinear {
            k += 1;
        }
        if k == n {
            return Err(HcsError::AllCollinear);
        }
        // The first k points lie on a line, sorted along it; fan them to pts[k].
        let q = k;
        let ccw = orient(pts[0], pts[k - 1], pts[q]) == Orientation::CounterClockwise;
        for i in 0..k - 1 {
            if ccw {
                t.add_triangle(i, i + 1, q);
            } else {
                t.add_triangle(i + 1, i, q);
            }
        }
        let mut hull: Vec<usize> = if ccw {
            (0..k).chain(std::iter::once(q)).collect()
        } else {
            std::iter::once(0).chain(std::iter::once(q)).chain((1..k).rev()).collect()
        };
        for p in q + 1..n {
            hull = t.add_external(&hull, p)?;
        }
        Ok(t)
    }

    fn edge(&mut self, a: usize, b: usize) {
        let key = (a.min(b), a.max(b));
        if !self.edges.contains_key(&key) {
            self.edges.insert(key, self.edge_ends.len());
            self.edge_ends.push(key);
            self.neighbours[a].push(b);
            self.neighbours[b].push(a);
        }
    }

    fn add_triangle(&mut self, a: usize, b: usize, c: usize) {
        debug_assert_eq!(orient(self.points[a], self.points[b], self.points[c]), Orientation::CounterClockwise);
        self.triangles.push([a, b, c]);
        self.edge(a, b);
        self.edge(b, c);
        self.edge(c, a);
    }

    /// Connects point `p` (outside the hull) to every hull edge it sees.
    fn add_external(&mut self, hull: &[usize], p: usize) -> Result<Vec<usize>, HcsError> {
        let h = hull.len();
        let pp = self.points[p];
        let visible: Vec<bool> = (0..h)
            .map(|i| orient(self.points[hull[i]], self.points[hull[(i + 1) % h]], pp) == Orientation::Clockwise)
            .collect();
        let Some(any) = visible.iter().position(|&v| v) else {
            return Err(HcsError::Collinear(self.points[hull[0]], self.points[hull[1 % h]], pp));
        };
        let mut s = any;
        while visible[(s + h - 1) % h] {
            s = (s + h - 1) % h;
            if s == any {
                break;
            }
        }
        let mut e = s;
        while visible[(e + 1) % h] && (e + 1) % h != s {
            e = (e + 1) % h;
        }
        let mut i = s;
        loop {
            let (a, b) = (hull[i], hull[(i + 1) % h]);
            self.add_triangle(b, a, p);
            if i == e {
                break;
            }
            i = (i + 1) % h;
        }
        // New hull: from hull[e+1] around to hull[s], then p.
        let mut out = Vec::with_capacity(h + 1);
        let mut j = (e + 1) % h;
        loop {
            out.push(hull[j]);
            if j == s {
                break;
            }
            j = (j + 1) % h;
        }
        out.push(p);
        Ok(out)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn vertex(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_ends(&self, e: EdgeId) -> (Point, Point) {
        let (a, b) = self.edge_ends[e];
        (self.points[a], self.points[b])
    }

    pub(crate) fn edge_vertices(&self, e: EdgeId) -> (usize, usize) {
        self.edge_ends[e]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    /// Canonical description independent of internal numbering: sorted
    /// triangles as point triples.
    pub fn signature(&self) -> Vec<[Point; 3]> {
        let mut out: Vec<[Point; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let mut v = [self.points[t[0]], self.points[t[1]], self.points[t[2]]];
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }
}

/// Three points far outside the box `[lo, hi]`, forming a triangle around it.
pub fn frame_points(lo: Point, hi: Point) -> [Point; 3] {
    let d = (hi.x - lo.x).max(hi.y - lo.y).max(1) + 2;
    let cx = lo.x + (hi.x - lo.x) / 2;
    let cy = lo.y + (hi.y - lo.y) / 2;
    [Point::new(cx - 4 * d, cy - 3 * d), Point::new(cx + 4 * d, cy - 3 * d), Point::new(cx, cy + 5 * d)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::convex_hull_with_boundary;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_with_centre_is_a_fan() {
        let t = Triangulation::build(&[p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1)], SweepOrder::LEXICOGRAPHIC).unwrap();
        assert_eq!(t.triangles().len(), 4);
        let c = t.vertex(p(1, 1)).unwrap();
        assert!(t.triangles().iter().all(|tr| tr.contains(&c)));
    }

    #[test]
    fn euler_count() {
        let pts: Vec<Point> = (0..40).map(|i: i64| p((i * 37) % 101, (i * i * 13) % 97)).collect();
        let mut uniq = pts.clone();
        uniq.sort();
        uniq.dedup();
        let h = convex_hull_with_boundary(&uniq).len();
        for order in [SweepOrder::LEXICOGRAPHIC, SweepOrder { a: 2, b: 3 }, SweepOrder { a: -1, b: 1 }] {
            let t = Triangulation::build(&pts, order).unwrap();
            assert_eq!(t.triangles().len(), 2 * uniq.len() - h - 2);
        }
    }

    #[test]
    fn collinear_prefix_and_determinism() {
        let pts = [p(0, 0), p(0, 1), p(0, 2), p(0, 3), p(1, 5), p(2, -1)];
        let a = Triangulation::build(&pts, SweepOrder::LEXICOGRAPHIC).unwrap();
        let b = Triangulation::build(&pts, SweepOrder::LEXICOGRAPHIC).unwrap();
        assert_eq!(a.signature(), b.signature());
        assert_eq!(a.triangles().len(), 2 * 6 - 6 - 2);
        assert_eq!(
            Triangulation::build(&[p(0, 0), p(1, 1), p(2, 2)], SweepOrder::LEXICOGRAPHIC).unwrap_err(),
            HcsError::AllCollinear
        );
    }

    #[test]
    fn frame_encloses_box() {
        let (lo, hi) = (p(-3, 5), p(40, 9));
        let f = frame_points(lo, hi);
        for q in [lo, hi, p(lo.x, hi.y), p(hi.x, lo.y)] {
            assert_eq!(orient(f[0], f[1], q), Orientation::CounterClockwise);
            assert_eq!(orient(f[1], f[2], q), Orientation::CounterClockwise);
            assert_eq!(orient(f[2], f[0], q), Orientation::CounterClockwise);
        }
    }
}
