//! Vertex release and shortening on a linked list of visits.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HcsError;
use crate::geom::Point;
use crate::obstacles::ObstacleSet;

use super::pcurve::{add_sweeps, rotate_in, rotate_out, PCurve, ThetaClass, Visit, Winding};

/// Order in which pending unstable visits are released.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderPolicy {
    #[default]
    Fifo,
    Lifo,
    Random(u64),
}

const NIL: usize = usize::MAX;

/// Mutable working form of a curve during shortening.
pub(crate) struct Work<'a> {
    obs: &'a dyn ObstacleSet,
    pts: Vec<Point>,
    turns: Vec<i64>,
    prev: Vec<usize>,
    next: Vec<usize>,
    alive: Vec<bool>,
    anchor: Vec<bool>,
    /// Original anchor slots, in curve order; merged anchors share a slot.
    tags: Vec<usize>,
    live: usize,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    policy: OrderPolicy,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Work<'a> {
    pub(crate) fn new(curve: &PCurve, anchors: &[bool], obs: &'a dyn ObstacleSet, policy: OrderPolicy) -> Self {
        let n = curve.len();
        debug_assert_eq!(anchors.len(), n);
        let rng = match policy {
            OrderPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut w = Work {
            obs,
            pts: curve.visits().iter().map(|v| v.point).collect(),
            turns: curve.visits().iter().map(|v| v.turns).collect(),
            prev: (0..n).map(|i| (i + n - 1) % n).collect(),
            next: (0..n).map(|i| (i + 1) % n).collect(),
            alive: vec![true; n],
            anchor: anchors.to_vec(),
            tags: (0..n).filter(|&i| anchors[i]).collect(),
            live: n,
            queue: VecDeque::new(),
            queued: vec![false; n],
            policy,
            rng,
        };
        for i in 0..n {
            w.push(i);
        }
        w
    }

    fn push(&mut self, i: usize) {
        if !self.queued[i] && !self.anchor[i] && self.unstable(i) {
            self.queued[i] = true;
            self.queue.push_back(i);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let i = match self.policy {
            OrderPolicy::Fifo => self.queue.pop_front(),
            OrderPolicy::Lifo => self.queue.pop_back(),
            OrderPolicy::Random(_) => {
                if self.queue.is_empty() {
                    None
                } else {
                    let k = self.rng.as_mut().unwrap().gen_range(0..self.queue.len());
                    self.queue.swap_remove_back(k)
                }
            }
        }?;
        self.queued[i] = false;
        Some(i)
    }

    fn winding(&self, i: usize) -> Winding {
        if self.live == 1 {
            return Winding { class: ThetaClass::Zero, turns: self.turns[i] };
        }
        let v = self.pts[i];
        let class = ThetaClass::of(self.pts[self.prev[i]] - v, self.pts[self.next[i]] - v);
        Winding { class, turns: self.turns[i] }
    }

    fn unstable(&self, i: usize) -> bool {
        self.alive[i] && self.live > 1 && self.winding(i).is_unstable()
    }

    fn alloc(&mut self, p: Point, turns: i64) -> usize {
        self.pts.push(p);
        self.turns.push(turns);
        self.prev.push(NIL);
        self.next.push(NIL);
        self.alive.push(true);
        self.anchor.push(false);
        self.queued.push(false);
        self.pts.len() - 1
    }

    fn unlink(&mut self, i: usize) {
        self.alive[i] = false;
        self.live -= 1;
    }

    /// Releases visit `i`, which must be alive, unstable and not anchored.
    pub(crate) fn release(&mut self, i: usize) -> Result<(), HcsError> {
        if self.anchor[i] {
            return Err(HcsError::AnchoredVisit(i));
        }
        if !self.unstable(i) {
            return Err(HcsError::StableVisit(i));
        }
        let (ui, wi) = (self.prev[i], self.next[i]);
        let (u, v, w) = (self.pts[ui], self.pts[i], self.pts[wi]);
        if u == w {
            self.release_u_turn(i, ui, wi);
            return Ok(());
        }
        let positive = self.winding(i).signum() > 0;
        let chain = self.obs.release_path(u, v, w)?;
        let z_first = chain.first().copied().unwrap_or(w);
        let z_last = chain.last().copied().unwrap_or(u);

        let t = self.pts[self.prev[ui]];
        self.turns[ui] = rotate_out(self.turns[ui], t - u, v - u, z_first - u);
        let x = self.pts[self.next[wi]];
        self.turns[wi] = rotate_in(self.turns[wi], v - w, z_last - w, x - w);

        self.unlink(i);
        let new_turns = if positive { -1 } else { 0 };
        let mut last = ui;
        for z in chain {
            let j = self.alloc(z, new_turns);
            self.next[last] = j;
            self.prev[j] = last;
            self.live += 1;
            last = j;
        }
        self.next[last] = wi;
        self.prev[wi] = last;
        self.push(ui);
        self.push(wi);
        Ok(())
    }

    /// The curve goes `u → v → u`: drop `v` and merge the two visits of `u`.
    fn release_u_turn(&mut self, i: usize, ui: usize, wi: usize) {
        if ui == wi {
            self.unlink(i);
            self.prev[ui] = ui;
            self.next[ui] = ui;
            return;
        }
        let (ti, xi) = (self.prev[ui], self.next[wi]);
        let u = self.pts[ui];
        let merged = add_sweeps(
            self.turns[ui],
            self.turns[wi],
            self.pts[ti] - u,
            self.pts[i] - u,
            self.pts[xi] - u,
        );
        let (keep, drop) = if self.anchor[wi] && !self.anchor[ui] { (wi, ui) } else { (ui, wi) };
        if self.anchor[drop] {
            // Both visits were anchors: the path between them is gone.
            for tag in self.tags.iter_mut() {
                if *tag == drop {
                    *tag = keep;
                }
            }
        }
        self.unlink(i);
        self.unlink(drop);
        self.turns[keep] = merged;
        if ti == wi {
            // Only `u` is left.
            self.prev[keep] = keep;
            self.next[keep] = keep;
        } else {
            self.prev[keep] = ti;
            self.next[ti] = keep;
            self.next[keep] = xi;
            self.prev[xi] = keep;
        }
        self.push(keep);
    }

    pub(crate) fn run(&mut self) -> Result<(), HcsError> {
        while let Some(i) = self.pop() {
            if self.live > 1 && self.alive[i] && !self.anchor[i] && self.unstable(i) {
                self.release(i)?;
            }
        }
        Ok(())
    }

    fn first_alive(&self) -> usize {
        self.alive.iter().position(|&a| a).expect("curve has a live visit")
    }

    /// Current curve, starting from the first surviving visit, plus the
    /// position of each original anchor in it.
    pub(crate) fn finish(&self) -> (PCurve, Vec<usize>) {
        let start = self.first_alive();
        let mut visits = Vec::with_capacity(self.live);
        let mut pos = vec![NIL; self.pts.len()];
        let mut i = start;
        loop {
            pos[i] = visits.len();
            visits.push(Visit::new(self.pts[i], self.turns[i]));
            i = self.next[i];
            if i == start || visits.len() == self.live {
                break;
            }
        }
        let anchors = self.tags.iter().map(|&t| pos[t]).collect();
        (PCurve::from_visits_unchecked(visits), anchors)
    }
}

/// Releases unstable non-anchored visits until none remain.
pub fn shorten(c: &PCurve, anchors: &[bool], obs: &dyn ObstacleSet, policy: OrderPolicy) -> Result<PCurve, HcsError> {
    Ok(shorten_tracked(c, anchors, obs, policy)?.0)
}

/// [`shorten`], also returning where each anchor ended up (in the order the
/// anchors appear in `c`). Two anchors joined by a path that shrank to nothing
/// report the same position.
pub fn shorten_tracked(
    c: &PCurve,
    anchors: &[bool],
    obs: &dyn ObstacleSet,
    policy: OrderPolicy,
) -> Result<(PCurve, Vec<usize>), HcsError> {
    if anchors.len() != c.len() {
        return Err(HcsError::TooFewPoints { needed: c.len(), got: anchors.len() });
    }
    let mut w = Work::new(c, anchors, obs, policy);
    w.run()?;
    Ok(w.finish())
}

/// Releases one visit and returns the result.
pub fn release_visit(c: &PCurve, i: usize, obs: &dyn ObstacleSet) -> Result<PCurve, HcsError> {
    let mut w = Work::new(c, &vec![false; c.len()], obs, OrderPolicy::Fifo);
    w.release(i)?;
    Ok(w.finish().0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstacles::{ExplicitObstacleSet, GridObstacleSet, Scale};
    use std::f64::consts::PI;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn grid() -> GridObstacleSet {
        GridObstacleSet::new(Scale::Exact(1))
    }

    #[test]
    fn release_on_grid_example() {
        // (1,2) released between (0,0) and (3,0); a far visit closes the curve.
        let c = PCurve::from_points(&[p(0, 0), p(1, 2), p(3, 0), p(2, -5)]).unwrap();
        let c = c.canonicalized(&grid()).with_principal_winding();
        let i = c.points().position(|q| q == p(1, 2)).unwrap();
        let r = release_visit(&c, i, &grid()).unwrap();
        let pts: Vec<Point> = r.points().collect();
        let s = pts.iter().position(|&q| q == p(0, 0)).unwrap();
        let rotated: Vec<Point> = (0..4).map(|k| pts[(s + k) % pts.len()]).collect();
        assert_eq!(rotated, vec![p(0, 0), p(1, 1), p(2, 1), p(3, 0)]);
        assert!(r.length() < c.length());
    }

    #[test]
    fn u_turn_merge_adds_angles() {
        // α at u (first visit) = 3π/4, α at the second u-visit = π/2.
        let u = p(0, 0);
        let t = p(1, 0);
        let v = p(-1, 1); // direction 3π/4 from +x
        let x = p(-1, -1); // direction 5π/4
        let obs = ExplicitObstacleSet::new(vec![u, t, v, x], Scale::Exact(1)).unwrap();
        let c = PCurve::new(vec![Visit::new(t, 0), Visit::new(u, 0), Visit::new(v, 0), Visit::new(u, 0), Visit::new(x, 0)]).unwrap();
        assert!((c.alpha(1) - 0.75 * PI).abs() < 1e-12);
        assert!((c.alpha(3) - 0.5 * PI).abs() < 1e-12);
        let r = release_visit(&c, 2, &obs).unwrap();
        let i = r.points().position(|q| q == u).unwrap();
        assert!((r.alpha(i) - 1.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn empty_triangle_release_leaves_edge() {
        let obs = ExplicitObstacleSet::new(vec![p(0, 0), p(0, 1), p(1, 0), p(5, 5)], Scale::Exact(1)).unwrap();
        let c = PCurve::from_points(&[p(0, 0), p(0, 1), p(1, 0), p(5, 5)]).unwrap();
        let r = release_visit(&c, 1, &obs).unwrap();
        assert_eq!(r.points().collect::<Vec<_>>(), vec![p(0, 0), p(1, 0), p(5, 5)]);
    }

    #[test]
    fn stable_or_anchored_visits_are_not_released() {
        let c = PCurve::from_points(&[p(0, 0), p(2, 0), p(0, 2)]).unwrap();
        let mut vs = c.visits().to_vec();
        vs[0].turns -= 1;
        let wound = PCurve::new(vs).unwrap();
        assert!(!wound.is_unstable(0));
        assert_eq!(release_visit(&wound, 0, &grid()), Err(HcsError::StableVisit(0)));
        let g = grid();
        let mut w = Work::new(&c, &[true, false, false], &g, OrderPolicy::Fifo);
        assert_eq!(w.release(0), Err(HcsError::AnchoredVisit(0)));
    }

    #[test]
    fn empty_triangle_shortens_to_a_null_point() {
        let c = PCurve::from_points(&[p(0, 0), p(1, 0), p(0, 1)]).unwrap();
        let r = shorten(&c, &[false; 3], &grid(), OrderPolicy::Fifo).unwrap();
        assert!(r.is_null_point());
    }

    #[test]
    fn loop_around_one_obstacle_keeps_its_winding() {
        let obs = ExplicitObstacleSet::new(vec![p(0, 0), p(3, 0), p(0, 3), p(1, 1)], Scale::Exact(1)).unwrap();
        let c2 = PCurve::from_points(&[p(0, 0), p(3, 0), p(0, 3)]).unwrap();
        let r = shorten(&c2, &[false; 3], &obs, OrderPolicy::Fifo).unwrap();
        assert!(r.is_collapsed());
        assert_eq!(r.visits()[0].point, p(1, 1));
        assert_ne!(r.visits()[0].turns, 0);
        let cw = shorten(&c2.reversed(), &[false; 3], &obs, OrderPolicy::Fifo).unwrap();
        assert_eq!(cw.visits()[0].turns, -r.visits()[0].turns);
    }
}
