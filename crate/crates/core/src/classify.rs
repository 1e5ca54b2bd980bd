//! Top-level verdict for a lift: fully essential fixed set, bounded orbits,
//! a bounded rational direction, or inconclusive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::{LatticeVec, Vec2};
use crate::maps::{equivariance_error, TorusLift};
use crate::regions::{essentiality_class, fixed_region, fixed_region_tolerance, EssentialityClass, EssentialityKind, Window};
use crate::rotation::min_width_direction;

/// Largest equivariance defect accepted before classifying.
pub const EQUIVARIANCE_LIMIT: f64 = 1e-6;

/// Directional extents at or below this count as identically zero.
pub const ZERO_EXTENT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyParams {
    pub samples: usize,
    pub n: u64,
    pub denom_max: i64,
    pub m_threshold: f64,
    pub window: Window,
    pub resolution: u32,
    pub seed: u64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            samples: 16,
            n: 10_000,
            denom_max: 5,
            m_threshold: 10.0,
            window: Window { x0: -4, x1: 4, y0: -4, y1: 4 },
            resolution: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrichotomyCase {
    FullyEssentialFix,
    AllBounded,
    Annular(LatticeVec),
    Inconclusive,
}

/// Direction of smallest spread of the sampled displacements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrationalCandidate {
    /// Unit vector `u` minimising `max |<f^n(z) - z, u>|`.
    pub direction: Vec2,
    pub extent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyEvidence {
    pub fix_class: EssentialityClass,
    pub fix_cells: usize,
    pub fix_is_whole_window: bool,
    pub max_extent: f64,
    /// Primitive directions along which no sampled orbit moved at all.
    pub zero_directions: Vec<LatticeVec>,
    pub annular_directions: Vec<LatticeVec>,
    pub irrational_candidate: Option<IrrationalCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyVerdict {
    pub map_spec: String,
    pub case: TrichotomyCase,
    pub evidence: TrichotomyEvidence,
    pub parameters: ClassifyParams,
}

struct OrbitStats {
    max_extent: f64,
    extents: Vec<f64>,
    displacements: Vec<Vec2>,
}

/// One pass over seeded orbits collecting planar and directional extents and
/// a thinned record of displacements.
fn orbit_stats(lift: &TorusLift, dirs: &[LatticeVec], n_max: u64, samples: usize, seed: u64) -> OrbitStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec2> = (0..samples).map(|_| Vec2::new(rng.random(), rng.random())).collect();
    let us: Vec<Vec2> = dirs.iter().map(|d| d.to_vec2()).collect();
    let stride = (n_max / 200).max(1);
    let per: Vec<(f64, Vec<f64>, Vec<Vec2>)> = starts
        .par_iter()
        .map(|&z| {
            let mut ext = vec![0.0f64; us.len()];
            let mut planar: f64 = 0.0;
            let mut record = vec![Vec2::ZERO];
            let mut w = z;
            for n in 1..=n_max {
                w = lift.apply(w);
                let d = w - z;
                planar = planar.max(d.norm());
                for (e, u) in ext.iter_mut().zip(&us) {
                    *e = e.max(d.dot(*u).abs());
                }
                if n % stride == 0 || n == n_max {
                    record.push(d);
                }
            }
            (planar, ext, record)
        })
        .collect();
    OrbitStats {
        max_extent: per.iter().map(|p| p.0).fold(0.0, f64::max),
        extents: (0..us.len()).map(|k| per.iter().map(|p| p.1[k]).fold(0.0, f64::max)).collect(),
        displacements: per.into_iter().flat_map(|p| p.2).collect(),
    }
}

/// Evaluate the cases in order, reporting all evidence:
///
/// 1. the fixed set is fully essential (and not everything) → `FullyEssentialFix`;
/// 2. orbits move but some rational direction sees no displacement at all → `Annular`;
/// 3. every orbit stays within `m_threshold` → `AllBounded`;
/// 4. some rational direction stays within `m_threshold` → `Annular`;
/// 5. otherwise `Inconclusive`, with the direction of least spread attached.
pub fn classify_map(lift: &TorusLift, params: &ClassifyParams) -> Result<TrichotomyVerdict> {
    if params.samples == 0 || params.n == 0 || params.denom_max < 1 {
        return Err(invalid("samples, horizon and denominator bound must be positive"));
    }
    if !(params.m_threshold >= 0.0) {
        return Err(invalid("threshold must be nonnegative"));
    }
    let eq = equivariance_error(lift, 64, params.seed)?;
    if eq > EQUIVARIANCE_LIMIT {
        return Err(invalid(format!("lift is not equivariant (defect {eq:e})")));
    }
    let fix = fixed_region(lift, fixed_region_tolerance(lift), params.resolution, params.window)?;
    let fix_class = essentiality_class(&fix)?;
    let fix_is_whole_window = fix.count() == fix.len();

    let dirs = LatticeVec::primitive_directions(params.denom_max);
    let stats = orbit_stats(lift, &dirs, params.n, params.samples, params.seed);
    let zero_directions: Vec<LatticeVec> = dirs
        .iter()
        .zip(&stats.extents)
        .filter(|(_, e)| **e <= ZERO_EXTENT)
        .map(|(d, _)| *d)
        .collect();
    let annular_directions: Vec<LatticeVec> = dirs
        .iter()
        .zip(&stats.extents)
        .filter(|(_, e)| **e <= params.m_threshold)
        .map(|(d, _)| *d)
        .collect();
    let irrational_candidate =
        min_width_direction(&stats.displacements).map(|(direction, extent)| IrrationalCandidate { direction, extent });

    let case = if fix_class.kind == EssentialityKind::FullyEssential && !fix_is_whole_window {
        TrichotomyCase::FullyEssentialFix
    } else if stats.max_extent > ZERO_EXTENT && !zero_directions.is_empty() {
        TrichotomyCase::Annular(zero_directions[0])
    } else if stats.max_extent <= params.m_threshold {
        TrichotomyCase::AllBounded
    } else if let Some(&v) = annular_directions.first() {
        TrichotomyCase::Annular(v)
    } else {
        TrichotomyCase::Inconclusive
    };
    Ok(TrichotomyVerdict {
        map_spec: lift.to_string(),
        case,
        evidence: TrichotomyEvidence {
            fix_cells: fix.count(),
            fix_class,
            fix_is_whole_window,
            max_extent: stats.max_extent,
            zero_directions,
            annular_directions,
            irrational_candidate,
        },
        parameters: params.clone(),
    })
}
