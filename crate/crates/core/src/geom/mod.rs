//! Planar primitives: projections, winding index, translation arcs,
//! convex hulls, quasiconvexity, density of lattice sets and directions at
//! infinity.

mod directions;
mod hull;
mod lattice;
mod polyline;
mod segment;
mod vector;

pub use directions::{boundary_directions, DirectionSet, MERGE_TOLERANCE};
pub use hull::{convex_hull, is_r_quasiconvex, ConvexPolygon};
pub use lattice::{is_r_dense, Rect, Sigma};
pub use polyline::{
    arcs_intersect, find_translation_arc, index_of_arc, is_translation_arc, Polyline, TranslationArc,
};
pub use segment::{point_segment_dist, segment_contact, segment_dist, Contact};
pub use vector::{LatticeVec, Vec2};

use crate::error::{invalid, Result};

/// Absolute tolerance on coordinates used by every geometric predicate.
pub const GEOM_TOL: f64 = 1e-9;

/// Orthogonal projection onto the line spanned by `v`: `<x, v> / |v|`.
pub fn project(x: Vec2, v: Vec2) -> Result<f64> {
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(invalid("projection direction must be a nonzero finite vector"));
    }
    Ok(x.dot(v) / n)
}

/// `(a, b) -> (-b, a)`.
pub fn perp(v: Vec2) -> Vec2 {
    v.perp()
}
