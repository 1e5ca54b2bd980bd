use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::Vec2;
use crate::error::{invalid, Result};

/// Angular tolerance used when merging sampled directions (2 degrees).
pub const MERGE_TOLERANCE: f64 = 2.0 * std::f64::consts::PI / 180.0;

/// Finite union of closed arcs of the unit circle.
///
/// Each interval is `(start, end)` with `start` in `[0, 2π)` and
/// `start <= end <= start + 2π`; an interval may run past `2π`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DirectionSet {
    pub intervals: Vec<(f64, f64)>,
}

impl DirectionSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_width(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_full_circle(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].1 - self.intervals[0].0 >= TAU - 1e-12
    }

    /// Whether the angle `theta` lies in the set, up to `tol`.
    pub fn contains(&self, theta: f64, tol: f64) -> bool {
        let t = theta.rem_euclid(TAU);
        self.intervals.iter().any(|&(a, b)| {
            [t - TAU, t, t + TAU]
                .iter()
                .any(|&s| s >= a - tol && s <= b + tol)
        })
    }

    /// Merge raw angles (any real values) into intervals with gap tolerance `tol`.
    pub fn from_angles(angles: &[f64], tol: f64) -> DirectionSet {
        if angles.is_empty() {
            return DirectionSet::default();
        }
        let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(TAU)).collect();
        a.sort_by(f64::total_cmp);
        // Largest gap, including the wrap-around gap.
        let n = a.len();
        let mut gaps: Vec<(f64, usize)> = (0..n)
            .map(|i| {
                let next = if i + 1 < n { a[i + 1] } else { a[0] + TAU };
                (next - a[i], i)
            })
            .collect();
        if gaps.iter().all(|&(g, _)| g <= tol) {
            return DirectionSet { intervals: vec![(0.0, TAU)] };
        }
        gaps.sort_by(|x, y| y.0.total_cmp(&x.0));
        // Start just after the largest gap so no interval straddles the cut.
        let start = (gaps[0].1 + 1) % n;
        let mut intervals = Vec::new();
        let mut lo = a[start];
        let mut hi = lo;
        for k in 1..n {
            let idx = (start + k) % n;
            let mut t = a[idx];
            while t < hi {
                t += TAU;
            }
            if t - hi <= tol {
                hi = t;
            } else {
                intervals.push((lo, hi));
                lo = a[idx];
                hi = lo;
            }
        }
        intervals.push((lo, hi));
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        DirectionSet { intervals }
    }
}

/// Directions accumulated by the far part (`|x| >= inner_radius`) of a point sample.
pub fn boundary_directions(points: &[Vec2], inner_radius: f64) -> Result<DirectionSet> {
    if !(inner_radius > 0.0) {
        return Err(invalid(format!("inner radius must be positive, got {inner_radius}")));
    }
    let angles: Vec<f64> = points
        .iter()
        .filter(|p| p.norm() >= inner_radius)
        .map(|p| p.angle())
        .collect();
    Ok(DirectionSet::from_angles(&angles, MERGE_TOLERANCE))
}
