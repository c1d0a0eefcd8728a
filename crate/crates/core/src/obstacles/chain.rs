use std::cmp::Ordering;

use crate::geom::{convex_hull, convex_hull_with_boundary, dot, orient, Orientation, Point};

/// Hull chain of `candidates \ {v}` strictly between `u` and `w`, on the side
/// facing `v`. `candidates` must be the obstacles of the closed triangle `uvw`
/// (extra points outside the triangle are ignored). With `keep_collinear`,
/// points lying inside chain edges are included in order.
pub fn near_chain(u: Point, v: Point, w: Point, candidates: Vec<Point>, keep_collinear: bool) -> Vec<Point> {
    let s = orient(u, v, w);
    debug_assert!(s != Orientation::Collinear);
    let su = orient(v, u, w);
    let sw = su.reversed();
    let on_ray = |p: Point, r: Point| orient(v, r, p) == Orientation::Collinear && dot(p - v, r - v) > 0;

    let mut ray_u = Vec::new();
    let mut ray_w = Vec::new();
    let mut inner = Vec::new();
    for p in candidates {
        if p == v || p == u || p == w {
            continue;
        }
        if on_ray(p, u) {
            if (p - v).norm_sq() < (u - v).norm_sq() {
                ray_u.push(p);
            }
        } else if on_ray(p, w) {
            if (p - v).norm_sq() < (w - v).norm_sq() {
                ray_w.push(p);
            }
        } else if orient(v, u, p) == su && orient(v, w, p) == sw && orient(u, w, p) != orient(u, w, v).reversed() {
            inner.push(p);
        }
    }
    ray_u.sort_by_key(|p| std::cmp::Reverse((*p - v).norm_sq()));
    ray_w.sort_by_key(|p| (*p - v).norm_sq());
    inner.sort_by(|&p, &q| {
        let o = orient(v, p, q);
        if o == Orientation::Collinear {
            (p - v).norm_sq().cmp(&(q - v).norm_sq())
        } else if o == su {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    inner.dedup_by(|q, p| orient(v, *p, *q) == Orientation::Collinear);

    let bad = |o: Orientation| o == s.reversed() || (!keep_collinear && o == Orientation::Collinear);
    let mut stack: Vec<Point> = Vec::with_capacity(ray_u.len() + inner.len() + ray_w.len() + 2);
    stack.push(u);
    for p in ray_u.into_iter().chain(inner).chain(ray_w).chain(std::iter::once(w)) {
        while stack.len() >= 2 && bad(orient(stack[stack.len() - 2], stack[stack.len() - 1], p)) {
            stack.pop();
        }
        stack.push(p);
    }
    stack.pop();
    stack.remove(0);
    stack
}

/// Reference chain computed from the full convex hull of the candidates:
/// the hull arc from `u` to `w` whose interior lies on `v`'s side of `uw`.
pub fn brute_release_chain(u: Point, v: Point, w: Point, candidates: &[Point], keep_collinear: bool) -> Vec<Point> {
    let pts: Vec<Point> = candidates.iter().copied().filter(|&p| p != v).collect();
    let side = orient(u, w, v);
    if !pts.iter().any(|&p| orient(u, w, p) == side) {
        if !keep_collinear {
            return Vec::new();
        }
        let mut on_uw: Vec<Point> = pts
            .into_iter()
            .filter(|&p| p != u && p != w && crate::geom::in_segment_interior(u, w, p))
            .collect();
        on_uw.sort_by_key(|p| (*p - u).norm_sq());
        return on_uw;
    }
    let hull = if keep_collinear { convex_hull_with_boundary(&pts) } else { convex_hull(&pts) };
    let n = hull.len();
    let iu = hull.iter().position(|&p| p == u).expect("u on hull");
    let iw = hull.iter().position(|&p| p == w).expect("w on hull");
    let forward: Vec<Point> = (1..n).map(|k| hull[(iu + k) % n]).take_while(|&p| p != w).collect();
    let mut backward: Vec<Point> = (1..n).map(|k| hull[(iw + k) % n]).take_while(|&p| p != u).collect();
    backward.reverse();
    if forward.iter().any(|&p| orient(u, w, p) == side) {
        forward
    } else {
        backward
    }
}
