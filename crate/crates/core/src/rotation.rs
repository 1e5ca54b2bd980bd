//! Rotation-set estimates, rotation vectors of sampled measures and
//! directional displacement bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::{convex_hull, ConvexPolygon, LatticeVec, Vec2};
use crate::maps::TorusLift;

/// Sums with pairwise (cascade) summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean of `xs`, shifted by the first element so that constant data is reproduced exactly.
fn shifted_mean(xs: &[f64]) -> f64 {
    let x0 = xs[0];
    let dev: Vec<f64> = xs.iter().map(|x| x - x0).collect();
    x0 + pairwise_sum(&dev) / xs.len() as f64
}

/// Points `(i / grid, j / grid)` of the unit square, row-major in `j`.
pub fn unit_grid(grid: usize) -> Vec<Vec2> {
    let g = grid as f64;
    (0..grid)
        .flat_map(|j| (0..grid).map(move |i| Vec2::new(i as f64 / g, j as f64 / g)))
        .collect()
}

/// Convex hull of displacement averages over a start-point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSetEstimate {
    pub hull: ConvexPolygon,
    pub n: u64,
    pub sample_count: usize,
    pub diameter: f64,
}

/// The averages `(f^n(z) - z) / n` for `z` on a `grid x grid` lattice of the unit square.
pub fn displacement_averages(lift: &TorusLift, n: u64, grid: usize) -> Result<Vec<Vec2>> {
    if n == 0 || grid == 0 {
        return Err(invalid("iterate count and grid size must be positive"));
    }
    let pts = unit_grid(grid);
    Ok(pts
        .par_iter()
        .map(|&z| {
            // Summing displacements keeps a constant displacement exact.
            let mut w = z;
            let mut total = Vec2::ZERO;
            for _ in 0..n {
                let d = lift.displacement(w);
                total += d;
                w += d;
            }
            total / n as f64
        })
        .collect())
}

pub fn rotation_set_estimate(lift: &TorusLift, n: u64, grid: usize) -> Result<RotationSetEstimate> {
    let avgs = displacement_averages(lift, n, grid)?;
    let hull = convex_hull(&avgs)?;
    let diameter = hull.diameter();
    Ok(RotationSetEstimate { hull, n, sample_count: avgs.len(), diameter })
}

/// Proxy for an invariant measure by a finite point sample of the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSampler {
    /// Cell midpoints of a `side x side` grid with `side = round(sqrt(N))`.
    LebesgueGrid,
    /// `N` uniform points from a seeded generator.
    LebesgueRandom { seed: u64 },
    /// The first `N` points of the orbit of `base`, reduced mod 1.
    OrbitBirkhoff { base: Vec2 },
    /// `N` copies of a single point.
    PointMass { point: Vec2 },
}

impl MeasureSampler {
    pub fn points(&self, lift: &TorusLift, count: usize) -> Vec<Vec2> {
        match self {
            MeasureSampler::LebesgueGrid => {
                let side = ((count as f64).sqrt().round() as usize).max(1);
                let s = side as f64;
                (0..side)
                    .flat_map(|j| (0..side).map(move |i| Vec2::new((i as f64 + 0.5) / s, (j as f64 + 0.5) / s)))
                    .collect()
            }
            MeasureSampler::LebesgueRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..count).map(|_| Vec2::new(rng.random(), rng.random())).collect()
            }
            MeasureSampler::OrbitBirkhoff { base } => {
                let mut w = base.fract_unit();
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    out.push(w);
                    w = lift.apply(w).fract_unit();
                }
                out
            }
            MeasureSampler::PointMass { point } => vec![*point; count],
        }
    }
}

/// Mean displacement under a sampled measure with its componentwise standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoEstimate {
    pub mean: Vec2,
    pub std_error: Vec2,
    pub count: usize,
    /// False when fewer than 30 points were used.
    pub reliable: bool,
}

pub fn rho_measure_estimate(lift: &TorusLift, sampler: &MeasureSampler, count: usize) -> Result<RhoEstimate> {
    if count == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let pts = sampler.points(lift, count);
    let disp: Vec<Vec2> = pts.par_iter().map(|&z| lift.displacement(z)).collect();
    let xs: Vec<f64> = disp.iter().map(|d| d.x).collect();
    let ys: Vec<f64> = disp.iter().map(|d| d.y).collect();
    let n = xs.len();
    let mean = Vec2::new(shifted_mean(&xs), shifted_mean(&ys));
    let se = |vals: &[f64], m: f64| {
        if n < 2 {
            return f64::INFINITY;
        }
        let sq: Vec<f64> = vals.iter().map(|v| (v - m) * (v - m)).collect();
        (pairwise_sum(&sq) / (n - 1) as f64 / n as f64).sqrt()
    };
    Ok(RhoEstimate {
        mean,
        std_error: Vec2::new(se(&xs, mean.x), se(&ys, mean.y)),
        count: n,
        reliable: n >= 30,
    })
}

/// `max_{0 <= n <= N} |<f^n(z) - z - n alpha, v>|`.
pub fn displacement_extent(lift: &TorusLift, z: Vec2, v: Vec2, alpha: Vec2, n_max: u64) -> Result<f64> {
    if v.norm() == 0.0 {
        return Err(invalid("direction must be nonzero"));
    }
    let mut w = z;
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        w = lift.apply(w);
        worst = worst.max((w - z - alpha * n as f64).dot(v).abs());
    }
    Ok(worst)
}

/// Primitive directions of sup-norm at most `denom_max` along which the raw
/// displacement stayed within `m_threshold` for `samples` seeded start points.
///
/// Directions are reported in the order of [`LatticeVec::primitive_directions`].
pub fn annularity_scan(
    lift: &TorusLift,
    denom_max: i64,
    n_max: u64,
    samples: usize,
    m_threshold: f64,
    seed: u64,
) -> Result<Vec<LatticeVec>> {
    if denom_max < 1 {
        return Err(invalid("denominator bound must be at least 1"));
    }
    let dirs = LatticeVec::primitive_directions(denom_max);
    let extents = directional_extents(lift, &dirs, n_max, samples, seed);
    Ok(dirs
        .into_iter()
        .zip(extents)
        .filter(|(_, e)| *e <= m_threshold)
        .map(|(d, _)| d)
        .collect())
}

/// Largest `|<f^n(z) - z, v>|` per direction over `samples` seeded start points and `n <= n_max`.
pub fn directional_extents(lift: &TorusLift, dirs: &[LatticeVec], n_max: u64, samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec2> = (0..samples).map(|_| Vec2::new(rng.random(), rng.random())).collect();
    let us: Vec<Vec2> = dirs.iter().map(|d| d.to_vec2()).collect();
    let per_start: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&z| {
            let mut ext = vec![0.0f64; us.len()];
            let mut w = z;
            for _ in 0..n_max {
                w = lift.apply(w);
                let d = w - z;
                for (e, u) in ext.iter_mut().zip(&us) {
                    *e = e.max(d.dot(*u).abs());
                }
            }
            ext
        })
        .collect();
    (0..us.len())
        .map(|k| per_start.iter().map(|e| e[k]).fold(0.0, f64::max))
        .collect()
}

/// Outcome of the single-vector test on a rotation-set estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoRotation {
    pub is_pseudo_rotation: bool,
    pub vector: Vec2,
    pub irrotational: bool,
}

pub fn pseudo_rotation_check(estimate: &RotationSetEstimate, tol: f64) -> PseudoRotation {
    let vector = estimate.hull.centroid();
    let is_pseudo_rotation = estimate.diameter <= tol;
    PseudoRotation {
        is_pseudo_rotation,
        vector,
        irrotational: is_pseudo_rotation && vector.norm() <= tol,
    }
}

/// Unit direction `u` minimising `max |<p, u>|` over `points`, with that value.
///
/// A 0.1° scan of the half circle is refined by golden-section search.
pub fn min_width_direction(points: &[Vec2]) -> Option<(Vec2, f64)> {
    if points.is_empty() {
        return None;
    }
    let hull = convex_hull(points).ok()?;
    let width = |t: f64| hull.max_abs_projection(Vec2::from_angle(t));
    let step = 0.1f64.to_radians();
    let count = (std::f64::consts::PI / step).round() as usize;
    let (mut best_t, mut best_w) = (0.0, f64::INFINITY);
    for k in 0..count {
        let t = k as f64 * step;
        let w = width(t);
        if w < best_w {
            best_t = t;
            best_w = w;
        }
    }
    let (mut a, mut b) = (best_t - step, best_t + step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if width(c) <= width(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    let (t, w) = if width(t) <= best_w { (t, width(t)) } else { (best_t, best_w) };
    Some((Vec2::from_angle(t), w))
}
