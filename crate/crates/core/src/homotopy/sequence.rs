use std::cmp::Ordering;

use crate::error::HcsError;
use crate::geom::{ccw_angle_cmp, cross, segments_cross_properly, Point};
use crate::hcs::{PCurve, ThetaClass, Visit, Winding};

use super::triangulation::{EdgeId, Triangulation};

/// Spokes (incident edges) of vertex `v` crossed by the winding arc at a
/// visit, in crossing order.
fn arc_crossings(t: &Triangulation, v: usize, d_in: Point, d_out: Point, w: Winding, out: &mut Vec<EdgeId>) {
    let vp = t.points()[v];
    let mut spokes: Vec<usize> = t.neighbours(v).to_vec();
    spokes.sort_by(|&a, &b| ccw_angle_cmp(d_in, t.points()[a] - vp, t.points()[b] - vp));
    let within = |s: usize| match w.class {
        ThetaClass::Zero => ccw_angle_cmp(d_in, t.points()[s] - vp, d_in) == Ordering::Equal,
        _ => ccw_angle_cmp(d_in, t.points()[s] - vp, d_out) != Ordering::Greater,
    };
    let id = |s: usize| t.edge_id(v, s).expect("spoke is an edge");
    if w.turns >= 0 {
        for _ in 0..w.turns {
            out.extend(spokes.iter().map(|&s| id(s)));
        }
        out.extend(spokes.iter().filter(|&&s| within(s)).map(|&s| id(s)));
    } else {
        for _ in (w.turns + 1)..0 {
            out.extend(spokes.iter().rev().map(|&s| id(s)));
        }
        out.extend(spokes.iter().rev().filter(|&&s| !within(s)).map(|&s| id(s)));
    }
}

/// Edges crossed by the open segment `ab` (shifted off any collinear edge),
/// ordered from `a` to `b`.
fn segment_crossings(t: &Triangulation, a: Point, b: Point, out: &mut Vec<EdgeId>) {
    let (lo, hi) = (Point::new(a.x.min(b.x), a.y.min(b.y)), Point::new(a.x.max(b.x), a.y.max(b.y)));
    let mut hits: Vec<(i128, i128, EdgeId)> = Vec::new();
    for e in 0..t.num_edges() {
        let (c, d) = t.edge_ends(e);
        if c.x.max(d.x) < lo.x || c.x.min(d.x) > hi.x || c.y.max(d.y) < lo.y || c.y.min(d.y) > hi.y {
            continue;
        }
        if segments_cross_properly(a, b, c, d) {
            // Parameter along ab: cross(c − a, d − c) / cross(b − a, d − c).
            let mut num = cross(c - a, d - c);
            let mut den = cross(b - a, d - c);
            if den < 0 {
                num = -num;
                den = -den;
            }
            hits.push((num, den, e));
        }
    }
    hits.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    out.extend(hits.into_iter().map(|h| h.2));
}

fn vertex_of(t: &Triangulation, p: Point) -> Result<usize, HcsError> {
    t.vertex(p).ok_or(HcsError::NotAVertex(p))
}

/// Circular sequence of triangulation edges crossed by a realisation of the
/// curve: straight parts shifted to their left, and at each visit an arc
/// around the obstacle sweeping the visit's winding angle.
pub fn edge_sequence(c: &PCurve, t: &Triangulation) -> Result<Vec<EdgeId>, HcsError> {
    let mut out = Vec::new();
    if c.is_collapsed() {
        let v = vertex_of(t, c.visits()[0].point)?;
        let vp = t.points()[v];
        let mut spokes: Vec<usize> = t.neighbours(v).to_vec();
        let r = t.points()[spokes[0]] - vp;
        spokes.sort_by(|&a, &b| ccw_angle_cmp(r, t.points()[a] - vp, t.points()[b] - vp));
        let k = c.visits()[0].turns;
        for _ in 0..k.unsigned_abs() {
            if k > 0 {
                out.extend(spokes.iter().map(|&s| t.edge_id(v, s).unwrap()));
            } else {
                out.extend(spokes.iter().rev().map(|&s| t.edge_id(v, s).unwrap()));
            }
        }
        return Ok(out);
    }
    let vs = c.visits();
    let n = vs.len();
    for i in 0..n {
        let v = vertex_of(t, vs[i].point)?;
        let (u, w) = (vs[(i + n - 1) % n].point, vs[(i + 1) % n].point);
        arc_crossings(t, v, u - vs[i].point, w - vs[i].point, c.winding(i), &mut out);
        segment_crossings(t, vs[i].point, w, &mut out);
    }
    Ok(out)
}

/// Edge sequence of an open path whose first and last visits are endpoints
/// (no arc is drawn there). Leading spokes of the start vertex and trailing
/// spokes of the end vertex are dropped after reduction, since turning
/// around an endpoint does not change the path's class.
pub fn path_edge_sequence(path: &[Visit], t: &Triangulation) -> Result<Vec<EdgeId>, HcsError> {
    let n = path.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for i in 0..n {
        if i > 0 && i + 1 < n {
            let v = vertex_of(t, path[i].point)?;
            let (u, w) = (path[i - 1].point - path[i].point, path[i + 1].point - path[i].point);
            let wnd = Winding { class: ThetaClass::of(u, w), turns: path[i].turns };
            arc_crossings(t, v, u, w, wnd, &mut out);
        }
        if i + 1 < n {
            segment_crossings(t, path[i].point, path[i + 1].point, &mut out);
        }
    }
    let mut red = reduce_linear(&out);
    let a = vertex_of(t, path[0].point)?;
    let b = vertex_of(t, path[n - 1].point)?;
    let touches = |e: EdgeId, v: usize| {
        let (x, y) = t.edge_vertices(e);
        x == v || y == v
    };
    let start = red.iter().take_while(|&&e| touches(e, a)).count();
    red.drain(..start);
    while red.last().is_some_and(|&e| touches(e, b)) {
        red.pop();
    }
    Ok(red)
}

/// Cancels adjacent equal pairs with a stack.
pub fn reduce_linear(seq: &[EdgeId]) -> Vec<EdgeId> {
    let mut st: Vec<EdgeId> = Vec::with_capacity(seq.len());
    for &e in seq {
        if st.last() == Some(&e) {
            st.pop();
        } else {
            st.push(e);
        }
    }
    st
}

/// Cancels adjacent equal pairs, treating the sequence as circular.
pub fn reduce(seq: &[EdgeId]) -> Vec<EdgeId> {
    let mut st = reduce_linear(seq);
    while st.len() >= 2 && st.first() == st.last() {
        st.pop();
        st.remove(0);
    }
    st
}

/// Equality of circular sequences up to rotation.
pub fn equal_up_to_rotation(a: &[EdgeId], b: &[EdgeId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == b[i]))
}
