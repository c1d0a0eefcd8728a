//! Homotopic curve shortening: P-curves, vertex release, steps and runs.

mod engine;
mod layers;
mod pcurve;
mod step;

pub use engine::{release_visit, shorten, shorten_tracked, OrderPolicy};
pub use layers::{convex_layers, hull_boundary_curve};
pub use pcurve::{PCurve, ThetaClass, Visit, Winding};
pub use step::{hcs_step, hcs_step_tracked, run, run_summary, snap_to_obstacles, HcsSummary, HcsTrace, ScaledPolyline, StepPieces, StopCondition};
