//! Numerical tools for lifts of torus homeomorphisms homotopic to the identity.
//!
//! The crate is organised bottom-up:
//!
//! - [`geom`]: planar vectors, polylines, winding index, translation arcs,
//!   convex hulls, quasiconvexity and directions at infinity.
//! - [`maps`]: the concrete lift families (rigid, shear, two-shear, stopped
//!   flow, disk rotation) and the `family:key=val` map-spec parser.
//! - [`rotation`]: rotation-set estimates, rotation vectors of sampled
//!   measures, directional displacement bounds.
//! - [`regions`]: raster set algebra (fill, components, `U_eps`, omega sets,
//!   fixed sets, essentiality) plus the `TRGR` raster format.
//! - [`chains`]: decreasing chains of rasters and the three-way chain classifier.
//! - [`recurrence`]: directional and lifted recurrence statistics.
//! - [`classify`]: the top-level verdict for a lift.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chains;
pub mod classify;
pub mod error;
pub mod geom;
pub mod maps;
pub mod recurrence;
pub mod regions;
pub mod rotation;

pub use error::{Error, Result};
pub use geom::{LatticeVec, Polyline, Vec2};
pub use maps::{MapSpec, TorusLift};
pub use regions::{GridRegion, Window};
