//! Homotopic curve shortening over point obstacles.
//!
//! The crate is organised bottom-up:
//!
//! * [`geom`] and [`measure`]: exact integer predicates and curve measures.
//! * [`obstacles`]: the implicit integer grid and explicit indexed point sets.
//! * [`hcs`]: P-curves with winding angles, vertex release, HCS steps and runs.
//! * [`homotopy`]: triangulation edge sequences used to check homotopy classes.
//! * [`acsf`]: a floating-point front-tracking affine curve-shortening flow.
//! * [`experiment`]: the grid/random comparison harness and SVG rendering.

pub mod acsf;
pub mod error;
pub mod experiment;
pub mod geom;
pub mod hcs;
pub mod homotopy;
pub mod io;
pub mod measure;
pub mod obstacles;

pub use error::HcsError;
pub use geom::{orient, FPoint, FPolyline, Orientation, Point, Polyline, RatPoint};
pub use hcs::{HcsTrace, OrderPolicy, PCurve, StopCondition, Visit};
pub use obstacles::{ExplicitObstacleSet, GridObstacleSet, ObstacleSet, Scale};
