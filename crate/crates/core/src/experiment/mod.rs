//! Grid and random-point HCS experiments against the affine flow, and SVG
//! rendering of curve families.

mod svg;

pub use svg::{render_svg, write_svg, SvgCurve};

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acsf::{AcsfParams, AcsfState};
use crate::error::HcsError;
use crate::geom::{FPoint, FPolyline};
use crate::hcs::{run_summary, snap_to_obstacles, PCurve, ScaledPolyline, StopCondition};
use crate::measure::h_distance;
use crate::obstacles::{ExplicitObstacleSet, GridObstacleSet, ObstacleSet, Region, Scale};

/// `m / (t* · N^(2/3))`.
pub fn estimate_constant(m: f64, t_star: f64, n: u64) -> Result<f64, HcsError> {
    if t_star <= 0.0 || !t_star.is_finite() {
        return Err(HcsError::NonPositiveTime);
    }
    Ok(m / (t_star * (n as f64).powf(2.0 / 3.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Grid,
    Random,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Grid => "grid",
            Backend::Random => "random",
        })
    }
}

/// Obstacles for one experiment cell: the `√N × √N` grid on the unit square,
/// or `N` random points in it.
pub fn build_obstacles(backend: Backend, n: u64, seed: u64) -> Result<Box<dyn ObstacleSet>, HcsError> {
    Ok(match backend {
        Backend::Grid => Box::new(GridObstacleSet::unit_square(n)),
        Backend::Random => Box::new(ExplicitObstacleSet::generate_random(Region::UNIT_SQUARE, n as usize, seed)?),
    })
}

/// A curve in world coordinates (lattice coordinates divided by the scale).
pub fn world_polyline(c: &PCurve, scale: Scale) -> FPolyline {
    let s = scale.to_f64();
    FPolyline { vertices: c.points().map(|p| FPoint::new(p.x as f64 / s, p.y as f64 / s)).collect(), closed: true }
}

/// The flow curve the HCS runs are compared with.
#[derive(Clone, Debug, PartialEq)]
pub struct AcsfTarget {
    pub t_star: f64,
    /// `None` when only the time is known.
    pub curve: Option<FPolyline>,
}

impl AcsfTarget {
    /// Flows `curve` until its length is `fraction` of the initial length.
    pub fn simulate(curve: &ScaledPolyline, fraction: f64, params: AcsfParams) -> Result<Self, HcsError> {
        let mut s = AcsfState::init(&curve.to_f64(), params)?;
        let out = s.run_to_length_fraction(fraction)?;
        Ok(AcsfTarget { t_star: out.t, curve: Some(out.curve) })
    }

    /// Reads `t,x,y` rows (as written by the flow simulator); the last time
    /// present and its samples form the target.
    pub fn from_csv(text: &str) -> Result<Self, HcsError> {
        let mut rows: Vec<(f64, FPoint)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('t') {
                continue;
            }
            let err = || HcsError::Parse { line: i + 1, msg: "expected `t,x,y`".into() };
            let f: Vec<f64> = line.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| err())?;
            if f.len() != 3 {
                return Err(err());
            }
            rows.push((f[0], FPoint::new(f[1], f[2])));
        }
        let t_star = rows.last().map(|r| r.0).ok_or(HcsError::Parse { line: 0, msg: "no samples".into() })?;
        let vertices = rows.into_iter().filter(|r| r.0 == t_star).map(|r| r.1).collect();
        Ok(AcsfTarget { t_star, curve: Some(FPolyline { vertices, closed: true }) })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub curve: ScaledPolyline,
    pub backend: Backend,
    pub ns: Vec<u64>,
    /// Seeds for the random backend; the grid backend ignores them.
    pub seeds: Vec<u64>,
    pub stop_fraction: f64,
    pub max_steps: Option<usize>,
    /// Report zero wall time so output is byte-reproducible.
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            curve: ScaledPolyline::delta(),
            backend: Backend::Grid,
            ns: vec![10_000],
            seeds: (0..5).collect(),
            stop_fraction: 0.7,
            max_steps: None,
            deterministic: false,
        }
    }
}

/// One row of results. `seed` is `None` for grid cells and for the mean row
/// of a random sweep, which has `mean == true`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub backend: Backend,
    pub n: u64,
    pub seed: Option<u64>,
    pub mean: bool,
    pub m: f64,
    pub t_star: f64,
    pub c: f64,
    pub h: Option<f64>,
    pub wall_ms: u64,
}

/// A cell that could not be run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub backend: Backend,
    pub n: u64,
    pub seed: Option<u64>,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentOutcome {
    pub reports: Vec<ExperimentReport>,
    pub skipped: Vec<SkippedCell>,
    /// Final HCS curve of each report row that ran (world coordinates).
    pub curves: Vec<FPolyline>,
}

struct CellResult {
    m: usize,
    curve: FPolyline,
    wall_ms: u64,
}

fn run_cell(cfg: &ExperimentConfig, n: u64, seed: u64) -> Result<CellResult, String> {
    let start = Instant::now();
    let obs = build_obstacles(cfg.backend, n, seed).map_err(|e| e.to_string())?;
    let c = snap_to_obstacles(&cfg.curve, obs.as_ref()).map_err(|e| e.to_string())?;
    if c.points().collect::<std::collections::HashSet<_>>().len() < 3 {
        return Err("curve snaps to fewer than 3 obstacles".into());
    }
    let mut stop = StopCondition::length_fraction(cfg.stop_fraction);
    stop.max_steps = cfg.max_steps;
    let s = run_summary(&c, obs.as_ref(), stop).map_err(|e| e.to_string())?;
    Ok(CellResult {
        m: s.steps_executed,
        curve: world_polyline(&s.final_curve, obs.scale()),
        wall_ms: if cfg.deterministic { 0 } else { start.elapsed().as_millis() as u64 },
    })
}

/// Runs every (N, seed) cell in parallel and reports iterations, the
/// constant estimate and the distance to the flow target.
pub fn run_conjecture_experiment(cfg: &ExperimentConfig, target: &AcsfTarget) -> Result<ExperimentOutcome, HcsError> {
    let seeds: Vec<Option<u64>> = match cfg.backend {
        Backend::Grid => vec![None],
        Backend::Random => cfg.seeds.iter().map(|&s| Some(s)).collect(),
    };
    let cells: Vec<(u64, Option<u64>)> = cfg.ns.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let results: Vec<Result<CellResult, String>> =
        cells.par_iter().map(|&(n, s)| run_cell(cfg, n, s.unwrap_or(0))).collect();

    let mut out = ExperimentOutcome::default();
    for &n in &cfg.ns {
        let mut ms = Vec::new();
        let mut hs = Vec::new();
        let mut wall = 0;
        for ((cn, seed), r) in cells.iter().zip(&results) {
            if *cn != n {
                continue;
            }
            match r {
                Ok(cell) => {
                    let h = target.curve.as_ref().map(|t| h_distance(&cell.curve, t));
                    let m = cell.m as f64;
                    out.reports.push(ExperimentReport {
                        backend: cfg.backend,
                        n,
                        seed: *seed,
                        mean: false,
                        m,
                        t_star: target.t_star,
                        c: estimate_constant(m, target.t_star, n)?,
                        h,
                        wall_ms: cell.wall_ms,
                    });
                    out.curves.push(cell.curve.clone());
                    ms.push(m);
                    hs.extend(h);
                    wall += cell.wall_ms;
                }
                Err(reason) => out.skipped.push(SkippedCell { backend: cfg.backend, n, seed: *seed, reason: reason.clone() }),
            }
        }
        if cfg.backend == Backend::Random && !ms.is_empty() {
            let m = ms.iter().sum::<f64>() / ms.len() as f64;
            let h = (hs.len() == ms.len()).then(|| hs.iter().sum::<f64>() / hs.len() as f64);
            out.reports.push(ExperimentReport {
                backend: cfg.backend,
                n,
                seed: None,
                mean: true,
                m,
                t_star: target.t_star,
                c: estimate_constant(m, target.t_star, n)?,
                h,
                wall_ms: wall,
            });
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "backend,N,seed,m,t_star,c,h,wall_ms";

/// CSV with the header row; the mean row of a random sweep has seed `mean`
/// and a missing distance is left empty.
pub fn reports_to_csv(reports: &[ExperimentReport]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        let seed = match (r.mean, r.seed) {
            (true, _) => "mean".to_string(),
            (false, Some(x)) => x.to_string(),
            (false, None) => String::new(),
        };
        let h = r.h.map(|h| h.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{},{},{},{}", r.backend, r.n, seed, r.m, r.t_star, r.c, h, r.wall_ms);
    }
    s
}

/// h-distances from each coarser run's final curve to the finest one, with
/// the ratios between consecutive distances.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub ns: Vec<u64>,
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Runs the grid backend at every `N` in `ns` (ascending) and measures the
/// distance of each final curve to the final curve at the largest `N`.
pub fn convergence_sweep(curve: &ScaledPolyline, ns: &[u64], stop_fraction: f64) -> Result<ConvergenceReport, HcsError> {
    let finals: Vec<FPolyline> = ns
        .par_iter()
        .map(|&n| {
            let g = GridObstacleSet::unit_square(n);
            let c = snap_to_obstacles(curve, &g)?;
            let s = run_summary(&c, &g, StopCondition::length_fraction(stop_fraction))?;
            Ok(world_polyline(&s.final_curve, g.scale()))
        })
        .collect::<Result<_, HcsError>>()?;
    let Some(finest) = finals.last() else {
        return Ok(ConvergenceReport { ns: Vec::new(), distances: Vec::new(), ratios: Vec::new() });
    };
    let distances: Vec<f64> = finals[..finals.len() - 1].iter().map(|c| h_distance(c, finest)).collect();
    let ratios = distances.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(ConvergenceReport { ns: ns[..ns.len() - 1].to_vec(), distances, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_formula() {
        // Table values were computed from an unrounded t*.
        assert!((estimate_constant(20.0, 0.0266, 10_000).unwrap() - 1.616).abs() < 5e-3);
        assert!((estimate_constant(93.0, 0.0266, 100_000).unwrap() - 1.619).abs() < 5e-3);
        assert_eq!(estimate_constant(0.0, 0.0266, 10_000).unwrap(), 0.0);
        assert_eq!(estimate_constant(1.0, 0.0, 10), Err(HcsError::NonPositiveTime));
    }

    #[test]
    fn grid_cell_without_target() {
        let cfg = ExperimentConfig { deterministic: true, ..ExperimentConfig::default() };
        let out = run_conjecture_experiment(&cfg, &AcsfTarget { t_star: 0.0266, curve: None }).unwrap();
        assert_eq!(out.reports.len(), 1);
        let r = &out.reports[0];
        assert_eq!(r.h, None);
        assert_eq!(r.c, estimate_constant(r.m, r.t_star, r.n).unwrap());
        let csv = reports_to_csv(&out.reports);
        assert!(csv.starts_with("backend,N,seed,m,t_star,c,h,wall_ms\ngrid,10000,,"));
    }

    #[test]
    fn tiny_n_is_skipped() {
        let curve = ScaledPolyline { den: 100, vertices: vec![(0, 0), (10, 0), (0, 10)] };
        let cfg = ExperimentConfig { curve, ns: vec![4], deterministic: true, ..ExperimentConfig::default() };
        let out = run_conjecture_experiment(&cfg, &AcsfTarget { t_star: 0.0266, curve: None }).unwrap();
        assert!(out.reports.is_empty());
        assert_eq!(out.skipped.len(), 1);
    }

    #[test]
    fn target_csv_uses_last_time() {
        let t = AcsfTarget::from_csv("t,x,y\n0,0,0\n0,1,0\n0.5,0,0\n0.5,1,1\n0.5,0,1\n").unwrap();
        assert_eq!(t.t_star, 0.5);
        assert_eq!(t.curve.unwrap().vertices.len(), 3);
    }
}
