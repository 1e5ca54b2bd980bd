//! Directional (Atkinson) and lifted recurrence statistics.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::Vec2;
use crate::maps::TorusLift;
use crate::rotation::{rotation_set_estimate, MeasureSampler};

/// One return time of the directional search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtkinsonHit {
    pub n: u64,
    pub torus_distance: f64,
    pub directional_sum: f64,
}

/// All `n <= N` where `f^n(x)` is `eps`-close to `x` on the torus and the
/// lifted displacement has `|<f^n(x) - x, v0>| < eps`.
pub fn atkinson_search(lift: &TorusLift, v0: Vec2, x: Vec2, n_max: u64, eps: f64) -> Result<Vec<AtkinsonHit>> {
    check_atkinson(v0, eps)?;
    let mut hits = Vec::new();
    let mut w = x;
    for n in 1..=n_max {
        w = lift.apply(w);
        let directional_sum = (w - x).dot(v0);
        if directional_sum.abs() < eps {
            let torus_distance = w.torus_dist(x);
            if torus_distance < eps {
                hits.push(AtkinsonHit { n, torus_distance, directional_sum });
            }
        }
    }
    Ok(hits)
}

fn check_atkinson(v0: Vec2, eps: f64) -> Result<()> {
    if v0.norm() == 0.0 || !v0.is_finite() {
        return Err(invalid("direction must be nonzero"));
    }
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// First Atkinson return time of `x`, if any.
pub fn atkinson_first_hit(lift: &TorusLift, v0: Vec2, x: Vec2, n_max: u64, eps: f64) -> Result<Option<u64>> {
    check_atkinson(v0, eps)?;
    let mut w = x;
    for n in 1..=n_max {
        w = lift.apply(w);
        if (w - x).dot(v0).abs() < eps && w.torus_dist(x) < eps {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Fraction of `samples` seeded uniform points with at least one Atkinson return.
pub fn atkinson_hit_rate(lift: &TorusLift, v0: Vec2, samples: usize, n_max: u64, eps: f64, seed: u64) -> Result<f64> {
    check_atkinson(v0, eps)?;
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec2> = (0..samples).map(|_| Vec2::new(rng.random(), rng.random())).collect();
    let hits = pts
        .par_iter()
        .filter(|&&x| matches!(atkinson_first_hit(lift, v0, x, n_max, eps), Ok(Some(_))))
        .count();
    Ok(hits as f64 / samples as f64)
}

/// Per-point lifted return statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub sample_count: usize,
    pub horizon: u64,
    pub epsilon: f64,
    pub recurrent_fraction: f64,
    pub points: Vec<Vec2>,
    pub first_returns: Vec<Option<u64>>,
    /// Smallest `|f^n(x) - x|` seen before the search stopped.
    pub min_distances: Vec<f64>,
    /// Diameter of a coarse rotation-set estimate, reported because extremality
    /// of the origin in the rotation set cannot be certified numerically.
    pub rotation_diameter: f64,
}

impl RecurrenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,first_return_n,min_distance\n");
        for ((p, r), d) in self.points.iter().zip(&self.first_returns).zip(&self.min_distances) {
            let r = r.map(|n| n.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{r},{d:e}", p.x, p.y);
        }
        out
    }
}

/// Share of sampled points whose lift returns within planar distance `eps` for some `1 <= n <= N`.
pub fn lifted_recurrence_fraction(
    lift: &TorusLift,
    sampler: &MeasureSampler,
    samples: usize,
    n_max: u64,
    eps: f64,
) -> Result<RecurrenceReport> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let points = sampler.points(lift, samples);
    let results: Vec<(Option<u64>, f64)> = points
        .par_iter()
        .map(|&x| {
            let mut w = x;
            let mut best = f64::INFINITY;
            for n in 1..=n_max {
                w = lift.apply(w);
                let d = w.dist(x);
                best = best.min(d);
                if d < eps {
                    return (Some(n), best);
                }
            }
            (None, best)
        })
        .collect();
    let recurrent = results.iter().filter(|(r, _)| r.is_some()).count();
    let rotation_diameter = rotation_set_estimate(lift, 200, 8)?.diameter;
    Ok(RecurrenceReport {
        sample_count: points.len(),
        horizon: n_max,
        epsilon: eps,
        recurrent_fraction: recurrent as f64 / points.len() as f64,
        first_returns: results.iter().map(|r| r.0).collect(),
        min_distances: results.iter().map(|r| r.1).collect(),
        points,
        rotation_diameter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::parse_map;

    #[test]
    fn identity_returns_everywhere() {
        let id = parse_map("rigid:0,0").unwrap();
        let hits = atkinson_search(&id, Vec2::new(1.0, 0.0), Vec2::new(0.3, 0.3), 20, 0.01).unwrap();
        assert_eq!(hits.len(), 20);
        assert!(hits.iter().all(|h| h.torus_distance == 0.0 && h.directional_sum == 0.0));
        let rep = lifted_recurrence_fraction(&id, &MeasureSampler::LebesgueRandom { seed: 0 }, 50, 5, 1e-3).unwrap();
        assert_eq!(rep.recurrent_fraction, 1.0);
        assert!(rep.first_returns.iter().all(|r| *r == Some(1)));
    }

    #[test]
    fn drifting_lift_never_returns() {
        let m = parse_map("rigid:0.5,0").unwrap();
        assert!(atkinson_search(&m, Vec2::new(1.0, 0.0), Vec2::new(0.1, 0.1), 100, 0.1).unwrap().is_empty());
        let rep = lifted_recurrence_fraction(&m, &MeasureSampler::LebesgueRandom { seed: 0 }, 20, 100, 0.1).unwrap();
        assert_eq!(rep.recurrent_fraction, 0.0);
        assert!(rep.rotation_diameter < 1e-12);
        assert!(atkinson_search(&m, Vec2::ZERO, Vec2::ZERO, 1, 0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let id = parse_map("rigid:0,0").unwrap();
        let rep = lifted_recurrence_fraction(&id, &MeasureSampler::PointMass { point: Vec2::new(0.5, 0.25) }, 2, 3, 0.1).unwrap();
        let csv = rep.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "x,y,first_return_n,min_distance");
        assert_eq!(csv.lines().nth(1).unwrap(), "0.5,0.25,1,0e0");
    }
}
