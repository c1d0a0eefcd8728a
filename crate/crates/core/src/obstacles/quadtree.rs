//! Point quadtree over integer coordinates.

use crate::geom::{orient, Orientation, Point, RatPoint};

use super::in_closed_triangle;

const CAPACITY: usize = 16;
const MAX_DEPTH: u32 = 32;

#[derive(Clone, Debug)]
enum Node {
    Leaf(Vec<Point>),
    Inner(Box<[QuadTree; 4]>),
}

/// Quadtree with closed axis-aligned cells.
#[derive(Clone, Debug)]
pub struct QuadTree {
    min: Point,
    max: Point,
    node: Node,
}

impl QuadTree {
    pub fn build(points: &[Point]) -> QuadTree {
        if points.is_empty() {
            return QuadTree { min: Point::new(0, 0), max: Point::new(0, 0), node: Node::Leaf(Vec::new()) };
        }
        let min = Point::new(points.iter().map(|p| p.x).min().unwrap(), points.iter().map(|p| p.y).min().unwrap());
        let max = Point::new(points.iter().map(|p| p.x).max().unwrap(), points.iter().map(|p| p.y).max().unwrap());
        Self::build_in(points.to_vec(), min, max, 0)
    }

    fn build_in(points: Vec<Point>, min: Point, max: Point, depth: u32) -> QuadTree {
        if points.len() <= CAPACITY || depth >= MAX_DEPTH || (min.x == max.x && min.y == max.y) {
            return QuadTree { min, max, node: Node::Leaf(points) };
        }
        let mx = min.x + (max.x - min.x) / 2;
        let my = min.y + (max.y - min.y) / 2;
        let cells = [
            (min, Point::new(mx, my)),
            (Point::new(mx + 1, min.y), Point::new(max.x, my)),
            (Point::new(min.x, my + 1), Point::new(mx, max.y)),
            (Point::new(mx + 1, my + 1), max),
        ];
        let mut parts: [Vec<Point>; 4] = Default::default();
        for p in points {
            let i = (p.x > mx) as usize + 2 * (p.y > my) as usize;
            parts[i].push(p);
        }
        let [a, b, c, d] = parts;
        let children = [a, b, c, d]
            .into_iter()
            .zip(cells)
            .map(|(pts, (lo, hi))| {
                // Empty cells may be degenerate (lo > hi); clamp to keep boxes valid.
                let hi = Point::new(hi.x.max(lo.x), hi.y.max(lo.y));
                Self::build_in(pts, lo, hi, depth + 1)
            })
            .collect::<Vec<_>>();
        let children: [QuadTree; 4] = children.try_into().expect("four children");
        QuadTree { min, max, node: Node::Inner(Box::new(children)) }
    }

    fn is_empty_leaf(&self) -> bool {
        matches!(&self.node, Node::Leaf(v) if v.is_empty())
    }

    /// True when the cell lies strictly outside one edge line of the triangle.
    fn outside_triangle(&self, tri: &[Point; 3]) -> bool {
        let ccw = orient(tri[0], tri[1], tri[2]) == Orientation::CounterClockwise;
        let corners = [self.min, Point::new(self.max.x, self.min.y), self.max, Point::new(self.min.x, self.max.y)];
        (0..3).any(|i| {
            let (a, b) = if ccw { (tri[i], tri[(i + 1) % 3]) } else { (tri[(i + 1) % 3], tri[i]) };
            corners.iter().all(|&c| orient(a, b, c) == Orientation::Clockwise)
        })
    }

    pub fn points_in_closed_triangle(&self, a: Point, b: Point, c: Point, out: &mut Vec<Point>) {
        let lo = Point::new(a.x.min(b.x).min(c.x), a.y.min(b.y).min(c.y));
        let hi = Point::new(a.x.max(b.x).max(c.x), a.y.max(b.y).max(c.y));
        self.triangle_rec(&[a, b, c], lo, hi, out);
    }

    fn triangle_rec(&self, tri: &[Point; 3], lo: Point, hi: Point, out: &mut Vec<Point>) {
        if self.is_empty_leaf() || self.max.x < lo.x || self.min.x > hi.x || self.max.y < lo.y || self.min.y > hi.y {
            return;
        }
        if self.outside_triangle(tri) {
            return;
        }
        match &self.node {
            Node::Leaf(pts) => out.extend(pts.iter().filter(|&&p| in_closed_triangle(tri[0], tri[1], tri[2], p))),
            Node::Inner(ch) => ch.iter().for_each(|c| c.triangle_rec(tri, lo, hi, out)),
        }
    }

    pub fn points_in_box(&self, lo: Point, hi: Point, out: &mut Vec<Point>) {
        if self.is_empty_leaf() || self.max.x < lo.x || self.min.x > hi.x || self.max.y < lo.y || self.min.y > hi.y {
            return;
        }
        match &self.node {
            Node::Leaf(pts) => out.extend(pts.iter().filter(|p| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y)),
            Node::Inner(ch) => ch.iter().for_each(|c| c.points_in_box(lo, hi, out)),
        }
    }

    fn box_dist_sq_scaled(&self, q: RatPoint) -> i128 {
        let d = q.den as i128;
        let axis = |v: i64, lo: i64, hi: i64| {
            let v = v as i128;
            let (lo, hi) = (lo as i128 * d, hi as i128 * d);
            if v < lo {
                lo - v
            } else if v > hi {
                v - hi
            } else {
                0
            }
        };
        let dx = axis(q.x, self.min.x, self.max.x);
        let dy = axis(q.y, self.min.y, self.max.y);
        dx * dx + dy * dy
    }

    /// Nearest point by (scaled squared distance, lexicographic order).
    pub fn nearest(&self, q: RatPoint) -> Option<Point> {
        let mut best: Option<(i128, Point)> = None;
        self.nearest_rec(q, &mut best);
        best.map(|(_, p)| p)
    }

    fn nearest_rec(&self, q: RatPoint, best: &mut Option<(i128, Point)>) {
        if self.is_empty_leaf() {
            return;
        }
        if let Some((bd, _)) = *best {
            if self.box_dist_sq_scaled(q) > bd {
                return;
            }
        }
        match &self.node {
            Node::Leaf(pts) => {
                for &p in pts {
                    let key = (q.dist_sq_scaled(p), p);
                    if best.map_or(true, |b| key < b) {
                        *best = Some(key);
                    }
                }
            }
            Node::Inner(ch) => {
                let mut order: Vec<(i128, usize)> = (0..4).map(|i| (ch[i].box_dist_sq_scaled(q), i)).collect();
                order.sort_unstable();
                for (_, i) in order {
                    ch[i].nearest_rec(q, best);
                }
            }
        }
    }
}
