use serde::{Deserialize, Serialize};

use crate::error::HcsError;
use crate::geom::{FPoint, FPolyline, Point};
use crate::obstacles::ObstacleSet;

use super::engine::{shorten_tracked, OrderPolicy};
use super::pcurve::{PCurve, Visit, Winding};

/// A closed polyline in world coordinates, each coordinate stored as an
/// integer over a shared denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledPolyline {
    pub den: i64,
    pub vertices: Vec<(i64, i64)>,
}

impl ScaledPolyline {
    /// The eight-vertex test curve with a self-intersection and an inflection.
    pub fn delta() -> Self {
        ScaledPolyline {
            den: 100,
            vertices: vec![(0, 0), (16, 81), (40, 45), (64, 100), (94, 30), (100, 45), (56, 7), (52, 13)],
        }
    }

    pub fn to_f64(&self) -> FPolyline {
        let d = self.den as f64;
        FPolyline {
            vertices: self.vertices.iter().map(|&(x, y)| FPoint::new(x as f64 / d, y as f64 / d)).collect(),
            closed: true,
        }
    }
}

/// Snaps each vertex to its nearest obstacle, merges repeats and inserts
/// straight-through visits, with the short-way winding everywhere.
pub fn snap_to_obstacles(input: &ScaledPolyline, obs: &dyn ObstacleSet) -> Result<PCurve, HcsError> {
    if input.vertices.len() < 3 {
        return Err(HcsError::TooFewPoints { needed: 3, got: input.vertices.len() });
    }
    let scale = obs.scale();
    let mut pts = Vec::with_capacity(input.vertices.len());
    for &(x, y) in &input.vertices {
        pts.push(obs.nearest(scale.to_lattice(x, y, input.den)).ok_or(HcsError::NoObstacles)?);
    }
    snap_lattice(&pts)
        .map(|c| c.canonicalized(obs).with_principal_winding())
}

fn snap_lattice(pts: &[Point]) -> Result<PCurve, HcsError> {
    let mut merged: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts {
        if merged.last() != Some(&p) {
            merged.push(p);
        }
    }
    while merged.len() > 1 && merged.first() == merged.last() {
        merged.pop();
    }
    if merged.len() == 1 {
        return Ok(PCurve::point(merged[0], 0));
    }
    PCurve::new(merged.into_iter().map(|p| Visit::new(p, 0)).collect())
}

/// One HCS step with the bookkeeping needed to compare the paths between
/// nailed visits before and after.
#[derive(Clone, Debug)]
pub struct StepPieces {
    /// Input curve with every non-nailed visit given its short-way winding.
    pub shortcut: PCurve,
    /// Indices of the nailed visits in `shortcut`.
    pub nailed: Vec<usize>,
    pub result: PCurve,
    /// Where each nailed visit ended up in `result`.
    pub nailed_after: Vec<usize>,
}

impl StepPieces {
    /// Pairs of paths between consecutive nailed visits, before and after
    /// shortening. Without nailed visits the list is empty.
    pub fn paths(&self) -> Vec<(Vec<Visit>, Vec<Visit>)> {
        let m = self.nailed.len();
        (0..m)
            .map(|j| {
                let k = (j + 1) % m;
                (
                    cyclic_piece(self.shortcut.visits(), self.nailed[j], self.nailed[k], m == 1),
                    cyclic_piece(self.result.visits(), self.nailed_after[j], self.nailed_after[k], m == 1),
                )
            })
            .collect()
    }
}

/// Visits from `a` to `b` inclusive, walking forward. With `whole`, `a == b`
/// walks the full cycle.
fn cyclic_piece(vs: &[Visit], a: usize, b: usize, whole: bool) -> Vec<Visit> {
    let n = vs.len();
    let mut len = (b + n - a) % n;
    if len == 0 && whole && n > 1 {
        len = n;
    }
    (0..=len).map(|d| vs[(a + d) % n]).collect()
}

pub fn hcs_step_tracked(c: &PCurve, obs: &dyn ObstacleSet, policy: OrderPolicy) -> Result<StepPieces, HcsError> {
    if c.is_collapsed() {
        return Err(HcsError::Collapsed);
    }
    let anchors: Vec<bool> = (0..c.len()).map(|i| c.is_nailed(i)).collect();
    let shortcut = PCurve::new(
        c.visits()
            .iter()
            .enumerate()
            .map(|(i, v)| if anchors[i] { *v } else { Visit::new(v.point, Winding::principal(c.winding(i).class).turns) })
            .collect(),
    )?;
    let nailed = (0..shortcut.len()).filter(|&i| anchors[i]).collect();
    let (result, nailed_after) = shorten_tracked(&shortcut, &anchors, obs, policy)?;
    Ok(StepPieces { shortcut, nailed, result, nailed_after })
}

/// `HCS(c)`: split at nailed visits, cut every other corner, shorten each
/// piece.
pub fn hcs_step(c: &PCurve, obs: &dyn ObstacleSet) -> Result<PCurve, HcsError> {
    Ok(hcs_step_tracked(c, obs, OrderPolicy::Fifo)?.result)
}

/// When to stop iterating. A collapsed curve always stops the run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StopCondition {
    /// Stop once the length is at most this fraction of the initial length.
    pub length_fraction: Option<f64>,
    pub max_steps: Option<usize>,
}

impl StopCondition {
    pub fn collapse() -> Self {
        StopCondition::default()
    }

    pub fn length_fraction(f: f64) -> Self {
        StopCondition { length_fraction: Some(f), max_steps: None }
    }

    pub fn max_steps(n: usize) -> Self {
        StopCondition { length_fraction: None, max_steps: Some(n) }
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = Some(n);
        self
    }

    fn reached(&self, steps: usize, length: f64, initial: f64) -> bool {
        self.length_fraction.is_some_and(|f| length <= f * initial) || self.max_steps.is_some_and(|m| steps >= m)
    }
}

/// Every curve of a run, starting with the input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HcsTrace {
    pub curves: Vec<PCurve>,
    pub lengths: Vec<f64>,
    pub steps_executed: usize,
    pub collapsed: bool,
}

/// Outcome of a run without the intermediate curves.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HcsSummary {
    pub final_curve: PCurve,
    pub lengths: Vec<f64>,
    pub steps_executed: usize,
    pub collapsed: bool,
}

fn iterate(
    c: &PCurve,
    obs: &dyn ObstacleSet,
    stop: StopCondition,
    mut record: impl FnMut(&PCurve),
) -> Result<HcsSummary, HcsError> {
    let initial = c.length();
    let mut lengths = vec![initial];
    let mut cur = c.clone();
    let mut steps = 0;
    record(&cur);
    while !cur.is_collapsed() && !stop.reached(steps, *lengths.last().unwrap(), initial) {
        cur = hcs_step(&cur, obs)?;
        steps += 1;
        lengths.push(cur.length());
        record(&cur);
    }
    Ok(HcsSummary { collapsed: cur.is_collapsed(), final_curve: cur, lengths, steps_executed: steps })
}

pub fn run(c: &PCurve, obs: &dyn ObstacleSet, stop: StopCondition) -> Result<HcsTrace, HcsError> {
    let mut curves = Vec::new();
    let s = iterate(c, obs, stop, |k| curves.push(k.clone()))?;
    Ok(HcsTrace { curves, lengths: s.lengths, steps_executed: s.steps_executed, collapsed: s.collapsed })
}

pub fn run_summary(c: &PCurve, obs: &dyn ObstacleSet, stop: StopCondition) -> Result<HcsSummary, HcsError> {
    iterate(c, obs, stop, |_| {})
}
