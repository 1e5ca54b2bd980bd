//! Decreasing chains of rasters and the three-way chain classifier.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::{boundary_directions, is_r_quasiconvex, DirectionSet, LatticeVec, Sigma, Vec2};
use crate::maps::TorusLift;
use crate::regions::{connected_component, region_from_predicate, u_epsilon_region, write_trgr, GridRegion, Window};

/// Widest merged direction interval, in degrees, still read as a single direction.
pub const ASYMPTOTIC_WIDTH_DEG: f64 = 10.0;

/// A finite decreasing chain of connected rasters with an exclusion set.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSample {
    levels: Vec<GridRegion>,
    sigma: Sigma,
}

impl ChainSample {
    pub fn new(levels: Vec<GridRegion>, sigma: Sigma) -> Result<Self> {
        let first = levels.first().ok_or_else(|| invalid("a chain needs at least one level"))?;
        let (w, r) = (first.window(), first.resolution());
        for (k, level) in levels.iter().enumerate() {
            if level.window() != w || level.resolution() != r {
                return Err(invalid(format!("level {k} has a different window or resolution")));
            }
            if level.is_empty() {
                return Err(invalid(format!("level {k} is empty")));
            }
            if level.component_count() != 1 {
                return Err(invalid(format!("level {k} is not connected")));
            }
            if k > 0 && !level.is_subset(&levels[k - 1])? {
                return Err(invalid(format!("level {k} is not contained in level {}", k - 1)));
            }
        }
        Ok(ChainSample { levels, sigma })
    }

    pub fn levels(&self) -> &[GridRegion] {
        &self.levels
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn window(&self) -> Window {
        self.levels[0].window()
    }

    pub fn deepest(&self) -> &GridRegion {
        self.levels.last().expect("chain is nonempty")
    }

    /// Elements of `Σ` whose translates can be observed inside the window.
    pub fn sigma_in_window(&self) -> Vec<LatticeVec> {
        let w = self.window();
        let reach = w.width().max(w.height()) - 1;
        self.sigma
            .members_in_box(reach)
            .into_iter()
            .filter(|v| !v.is_zero() && v.a.abs() < w.width() && v.b.abs() < w.height())
            .collect()
    }
}

/// Whether `region ∩ (region + v)` is nonempty, scanning marked cells only.
fn meets(region: &GridRegion, cells: &[usize], v: LatticeVec) -> bool {
    let res = region.resolution() as i64;
    let (cols, rows) = (region.cols() as i64, region.rows() as i64);
    let (di, dj) = (v.a * res, v.b * res);
    if di.abs() >= cols || dj.abs() >= rows {
        return false;
    }
    let bits = region.bits();
    cells.iter().any(|&k| {
        let (i, j) = (k as i64 % cols + di, k as i64 / cols + dj);
        i >= 0 && j >= 0 && i < cols && j < rows && bits[(j * cols + i) as usize]
    })
}

fn marked(region: &GridRegion) -> Vec<usize> {
    region.marked_indices().collect()
}

/// Least level index `n` with `levels[n] ∩ (levels[n] + v) = ∅`.
pub fn chain_free_check(chain: &ChainSample, v: LatticeVec) -> Option<usize> {
    if v.is_zero() {
        return None;
    }
    // Freeness is inherited by sub-levels, so the free levels form a suffix.
    let free = |k: usize| {
        let level = &chain.levels[k];
        !meets(level, &marked(level), v)
    };
    let n = chain.levels.len();
    if !free(n - 1) {
        return None;
    }
    let (mut lo, mut hi) = (0usize, n - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if free(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Best-fit bounding strip `{|<z, v>| <= m}` of a level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripFit {
    /// Unit normal of the strip.
    pub v: Vec2,
    pub m: f64,
    /// Ratio of the minor to the major principal variance.
    pub anisotropy: f64,
}

/// Two distinct boundary-touching complement components on either side of a strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub positive_side_cells: usize,
    pub negative_side_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ChainCase {
    Case1SigmaFreeModLine { w: LatticeVec },
    Case2AsymptoticDirection { u: Vec2 },
    Case3BoundedDeviation { v: Vec2, m: f64 },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEvidence {
    /// Number of in-window elements of `Σ` checked for eventual freeness.
    pub sigma_checked: usize,
    /// Largest first-free level over those elements.
    pub max_first_free_level: usize,
    /// Level certifying case 1, with the in-window `Σ` translates it still meets.
    pub case1_level: Option<usize>,
    pub case1_hits: Vec<LatticeVec>,
    /// Levels skipped for case 1 because they touch the window boundary.
    pub unbounded_levels: Vec<usize>,
    pub directions: DirectionSet,
    pub direction_width_deg: Option<f64>,
    pub strip: Option<StripFit>,
    pub separation: Option<SeparationWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainVerdict {
    #[serde(flatten)]
    pub case: ChainCase,
    pub evidence: ChainEvidence,
}

/// First element of `Σ` in the order `(1,0), (0,1)`, then by sup-norm.
fn default_w(sigma: &Sigma) -> Option<LatticeVec> {
    [LatticeVec::new(1, 0), LatticeVec::new(0, 1)]
        .into_iter()
        .find(|v| sigma.contains(*v))
        .or_else(|| sigma.members_in_box(4).into_iter().find(|v| !v.is_zero()))
}

/// Apply the three-way decision: case 1, then case 2, then case 3.
///
/// Case 1 is only certified on levels not touching the window boundary, where
/// freeness from every element of `Σ` can be decided inside the window.
pub fn classify_chain(chain: &ChainSample) -> Result<ChainVerdict> {
    let sigma_vs = chain.sigma_in_window();
    let mut max_first_free = 0;
    for &v in &sigma_vs {
        match chain_free_check(chain, v) {
            Some(n) => max_first_free = max_first_free.max(n),
            None => {
                return Err(Error::PreconditionViolation(format!(
                    "chain is not eventually free for {v} at this depth"
                )))
            }
        }
    }
    let mut evidence = ChainEvidence {
        sigma_checked: sigma_vs.len(),
        max_first_free_level: max_first_free,
        case1_level: None,
        case1_hits: Vec::new(),
        unbounded_levels: Vec::new(),
        directions: DirectionSet::default(),
        direction_width_deg: None,
        strip: None,
        separation: None,
    };

    let mut case1 = None;
    for (k, level) in chain.levels.iter().enumerate() {
        if level.touches_boundary() {
            evidence.unbounded_levels.push(k);
            continue;
        }
        let cells = marked(level);
        let hits: Vec<LatticeVec> = sigma_vs.iter().copied().filter(|&v| meets(level, &cells, v)).collect();
        let w = match hits.first() {
            None => default_w(&chain.sigma),
            Some(&h) if hits.iter().all(|x| x.is_parallel(h)) => hits.iter().copied().min_by_key(|x| x.sup_norm()),
            Some(_) => None,
        };
        if let Some(w) = w {
            evidence.case1_level = Some(k);
            evidence.case1_hits = hits;
            case1 = Some(w);
            break;
        }
    }

    let deepest = chain.deepest();
    let centers = deepest.marked_centers();
    let window = chain.window();
    let origin = window.center();
    let inner = 0.6 * 0.5 * window.width().min(window.height()) as f64;
    let rel: Vec<Vec2> = centers.iter().map(|&c| c - origin).collect();
    evidence.directions = boundary_directions(&rel, inner)?;
    if evidence.directions.len() == 1 {
        let (a, b) = evidence.directions.intervals[0];
        evidence.direction_width_deg = Some((b - a).to_degrees());
    }
    let strip = strip_fit(&centers);
    evidence.separation = strip.as_ref().and_then(|s| separation_witness(deepest, s));
    evidence.strip = strip;

    if let Some(w) = case1 {
        return Ok(ChainVerdict { case: ChainCase::Case1SigmaFreeModLine { w }, evidence });
    }
    if let Some(width) = evidence.direction_width_deg {
        if width <= ASYMPTOTIC_WIDTH_DEG {
            let (a, b) = evidence.directions.intervals[0];
            let u = Vec2::from_angle(0.5 * (a + b));
            return Ok(ChainVerdict { case: ChainCase::Case2AsymptoticDirection { u }, evidence });
        }
    }
    if let (Some(s), Some(_)) = (&evidence.strip, &evidence.separation) {
        let case = ChainCase::Case3BoundedDeviation { v: s.v, m: s.m };
        return Ok(ChainVerdict { case, evidence });
    }
    Ok(ChainVerdict { case: ChainCase::Undetermined, evidence })
}

/// Principal-axis strip: the normal is the minor axis of the centre cloud and
/// `m` the largest `|<c, v>|`.
fn strip_fit(points: &[Vec2]) -> Option<StripFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = *p - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let half_trace = 0.5 * (sxx + syy);
    let disc = (0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy).sqrt();
    let (major, minor) = (half_trace + disc, half_trace - disc);
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let axis = Vec2::from_angle(theta);
    let mut v = axis.perp();
    if v.y < -1e-9 || (v.y.abs() <= 1e-9 && v.x < 0.0) {
        v = -v;
    }
    let m = points.iter().map(|p| p.dot(v).abs()).fold(0.0, f64::max);
    Some(StripFit { v, m, anisotropy: if major > 0.0 { minor / major } else { 1.0 } })
}

fn separation_witness(level: &GridRegion, strip: &StripFit) -> Option<SeparationWitness> {
    let comps: Vec<GridRegion> = level
        .complement_components()
        .into_iter()
        .filter(|c| c.touches_boundary())
        .collect();
    let side = |c: &GridRegion, sign: f64| {
        c.marked_indices()
            .any(|k| sign * c.cell_center_of_index(k).dot(strip.v) >= strip.m + 1.0)
    };
    let pos: Vec<usize> = (0..comps.len()).filter(|&k| side(&comps[k], 1.0)).collect();
    let neg: Vec<usize> = (0..comps.len()).filter(|&k| side(&comps[k], -1.0)).collect();
    let (pos, neg) = pos
        .iter()
        .find_map(|&p| neg.iter().find(|&&n| n != p).map(|&n| (p, n)))?;
    Some(SeparationWitness { positive_side_cells: comps[pos].count(), negative_side_cells: comps[neg].count() })
}

/// `is_r_quasiconvex` on the cell centres of the deepest level.
pub fn chain_quasiconvexity(chain: &ChainSample, r: f64) -> Result<bool> {
    is_r_quasiconvex(&chain.deepest().marked_centers(), r, 64)
}

/// The chain `U_{1/(n+1)}(z)` for `n < depth`, intersected downward and
/// reduced to the component of `z`.
pub fn build_disk_chain(
    lift: &TorusLift,
    z: Vec2,
    depth: usize,
    n_max: u64,
    window: Window,
    resolution: u32,
    sigma: Sigma,
) -> Result<ChainSample> {
    if depth < 2 {
        return Err(invalid("chain depth must be at least 2"));
    }
    let mut levels: Vec<GridRegion> = Vec::with_capacity(depth);
    for n in 0..depth {
        let u = u_epsilon_region(lift, z, 1.0 / (n as f64 + 1.0), n_max, window, resolution)?;
        let level = match levels.last() {
            Some(prev) => connected_component(&u.region.intersection(prev)?, z)?,
            None => u.region,
        };
        levels.push(level);
    }
    ChainSample::new(levels, sigma)
}

/// Balls of radius `0.4 / (n + 1)` about `center`.
pub fn ball_chain(center: Vec2, depth: usize, window: Window, resolution: u32, sigma: Sigma) -> Result<ChainSample> {
    let levels = (0..depth)
        .map(|n| {
            let r = 0.4 / (n as f64 + 1.0);
            region_from_predicate(window, resolution, |c| c.dist(center) < r.max(0.5 / resolution as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    ChainSample::new(levels, sigma)
}

/// Rays from the window centre in direction `dir`, thickened to width `1 / (n + 1)`.
pub fn ray_chain(dir: Vec2, depth: usize, window: Window, resolution: u32, sigma: Sigma) -> Result<ChainSample> {
    let u = dir.normalized().ok_or_else(|| invalid("ray direction must be nonzero"))?;
    let o = window.center();
    let levels = (0..depth)
        .map(|n| {
            let half = 0.5 / (n as f64 + 1.0);
            region_from_predicate(window, resolution, |c| {
                let d = c - o;
                let t = d.dot(u);
                t >= -half && d.cross(u).abs() <= half
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ChainSample::new(levels, sigma)
}

/// Horizontal strips `|y| <= 1 / (2 (n + 1))`.
pub fn strip_chain(depth: usize, window: Window, resolution: u32, sigma: Sigma) -> Result<ChainSample> {
    let levels = (0..depth)
        .map(|n| {
            let half = 0.5 / (n as f64 + 1.0);
            region_from_predicate(window, resolution, |c| c.y.abs() <= half)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainSample::new(levels, sigma)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainManifest {
    pub window: Window,
    pub resolution: u32,
    pub sigma: Sigma,
    pub levels: Vec<String>,
    pub verdict: ChainVerdict,
}

/// Write `level_XXX.trgr` files and `manifest.json` into `dir`.
pub fn export_chain(chain: &ChainSample, verdict: &ChainVerdict, dir: &Path) -> Result<ChainManifest> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (k, level) in chain.levels.iter().enumerate() {
        let name = format!("level_{k:03}.trgr");
        let file = fs::File::create(dir.join(&name))?;
        write_trgr(level, std::io::BufWriter::new(file))?;
        names.push(name);
    }
    let manifest = ChainManifest {
        window: chain.window(),
        resolution: chain.levels[0].resolution(),
        sigma: chain.sigma.clone(),
        levels: names,
        verdict: verdict.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}
