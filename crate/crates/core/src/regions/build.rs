use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fill_holes, region_from_predicate, tile_periodic, GridRegion, Window, N4};
use crate::error::{invalid, Result};
use crate::geom::{LatticeVec, Vec2};
use crate::maps::TorusLift;

/// `U_eps(z)` together with its period under the lift.
#[derive(Debug, Clone, PartialEq)]
pub struct UEpsilon {
    pub region: GridRegion,
    /// Least `k >= 1` with `f^k(U) ∩ U ≠ ∅`, if one was found up to the horizon.
    pub period: Option<u64>,
    /// True unless the period is 1.
    pub free: bool,
}

/// Filled component of `z` in `⋃_{|n| <= N} f^n(B_eps(z))`.
///
/// Images are rasterised by pushing the centres of the ball's cells.
pub fn u_epsilon_region(
    lift: &TorusLift,
    z: Vec2,
    eps: f64,
    n_max: u64,
    window: Window,
    resolution: u32,
) -> Result<UEpsilon> {
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let mut union = GridRegion::empty(window, resolution)?;
    let home = union
        .index_of(z)
        .ok_or_else(|| invalid(format!("point {z} lies outside the window")))?;
    let ball: Vec<Vec2> = region_from_predicate(window, resolution, |c| c.dist(z) < eps)?.marked_centers();
    let mut ball_idx: Vec<usize> = ball.iter().filter_map(|&c| union.index_of(c)).collect();
    ball_idx.push(home);
    let proto = union.clone();
    let hits: Vec<Vec<usize>> = ball
        .par_iter()
        .map(|&c| {
            let mut out = Vec::new();
            let mut w = c;
            for _ in 0..n_max {
                w = lift.apply(w);
                out.extend(proto.index_of(w));
            }
            let mut w = c;
            for _ in 0..n_max {
                w = lift.inverse_apply(w);
                out.extend(proto.index_of(w));
            }
            out
        })
        .collect();
    for k in ball_idx.into_iter().chain(hits.into_iter().flatten()) {
        union.bits[k] = true;
    }
    let component = super::connected_component(&union, z)?;
    let region = fill_holes(&component);
    let period = first_return(lift, &region, n_max);
    Ok(UEpsilon { region, period, free: period != Some(1) })
}

/// Least `k` in `1..=n_max` with `f^k(region)` meeting `region`, by pushing cell centres.
fn first_return(lift: &TorusLift, region: &GridRegion, n_max: u64) -> Option<u64> {
    region
        .marked_centers()
        .par_iter()
        .filter_map(|&c| {
            let mut w = c;
            for k in 1..=n_max {
                w = lift.apply(w);
                if region.contains_point(w) {
                    return Some(k);
                }
            }
            None
        })
        .min()
}

/// Which intersection of half-plane preimages to rasterise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVariant {
    /// `⋂_{|i| <= N} f^i(H_v^+)`.
    Omega,
    /// `⋂_{0 <= i <= N} f^{-i}(H_v^+)`.
    B,
}

/// Unbounded part of the truncated intersection of iterates of `H_v^+ = {<z, v> >= 0}`.
pub fn omega_region(
    lift: &TorusLift,
    v: Vec2,
    n_max: u64,
    window: Window,
    resolution: u32,
    variant: OmegaVariant,
) -> Result<GridRegion> {
    if v.norm() == 0.0 || !v.is_finite() {
        return Err(invalid("direction must be nonzero"));
    }
    let inside = |c: Vec2| {
        if c.dot(v) < 0.0 {
            return false;
        }
        let mut w = c;
        for _ in 0..n_max {
            w = lift.apply(w);
            if w.dot(v) < 0.0 {
                return false;
            }
        }
        if variant == OmegaVariant::Omega {
            let mut w = c;
            for _ in 0..n_max {
                w = lift.inverse_apply(w);
                if w.dot(v) < 0.0 {
                    return false;
                }
            }
        }
        true
    };
    let raw = region_from_predicate(window, resolution, inside)?;
    Ok(raw.unbounded_part())
}

/// Default tolerance for [`fixed_region`]: tighter for closed-form families.
pub fn fixed_region_tolerance(lift: &TorusLift) -> f64 {
    if lift.is_closed_form() {
        1e-6
    } else {
        1e-4
    }
}

/// Cells whose centre is displaced by at most `tol`, computed on the unit
/// square and tiled over `window`.
pub fn fixed_region(lift: &TorusLift, tol: f64, resolution: u32, window: Window) -> Result<GridRegion> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let unit = Window::new(0, 1, 0, 1)?;
    let tile = region_from_predicate(unit, resolution, |c| lift.displacement(c).norm() <= tol)?;
    tile_periodic(&tile, window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EssentialityKind {
    Inessential,
    EssentialNotFully,
    FullyEssential,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialityClass {
    pub kind: EssentialityKind,
    pub rank: u8,
    pub generators: Vec<LatticeVec>,
}

impl EssentialityClass {
    fn from_vectors(lambda: &[LatticeVec]) -> EssentialityClass {
        let Some(&first) = lambda.first() else {
            return EssentialityClass { kind: EssentialityKind::Inessential, rank: 0, generators: vec![] };
        };
        match lambda.iter().find(|w| !w.is_parallel(first)) {
            None => EssentialityClass {
                kind: EssentialityKind::EssentialNotFully,
                rank: 1,
                generators: vec![first.primitive().canonical_sign()],
            },
            Some(&second) => EssentialityClass {
                kind: EssentialityKind::FullyEssential,
                rank: 2,
                generators: vec![first, second],
            },
        }
    }
}

/// Rank of `{v : |v|_∞ <= 2, C + v meets C}`, maximised over the components
/// `C` meeting the central fundamental domain of a `Z²`-periodic raster.
pub fn essentiality_class(region: &GridRegion) -> Result<EssentialityClass> {
    let w = region.window();
    if w.width() < 3 || w.height() < 3 {
        return Err(invalid("essentiality needs a window of at least 3 x 3 fundamental domains"));
    }
    let res = region.resolution() as usize;
    let (cols, rows) = (region.cols(), region.rows());
    for j in 0..rows {
        for i in 0..cols {
            let b = region.get(i, j);
            if (i + res < cols && region.get(i + res, j) != b) || (j + res < rows && region.get(i, j + res) != b) {
                return Err(invalid("region is not invariant under integer translations"));
            }
        }
    }
    let (labels, _) = region.label(true, &N4);
    let centre = region.window().center();
    let (ci, cj) = (
        ((centre.x.floor() - w.x0 as f64) as usize) * res,
        ((centre.y.floor() - w.y0 as f64) as usize) * res,
    );
    let mut central: Vec<u32> = Vec::new();
    for j in cj..(cj + res).min(rows) {
        for i in ci..(ci + res).min(cols) {
            let l = labels[j * cols + i];
            if l != u32::MAX && !central.contains(&l) {
                central.push(l);
            }
        }
    }
    central.sort_unstable();
    let mut shifts: Vec<LatticeVec> = (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| LatticeVec::new(a, b)))
        .filter(|v| !v.is_zero())
        .collect();
    shifts.sort_by_key(|v| (v.sup_norm(), v.a.abs() + v.b.abs(), std::cmp::Reverse(v.a), std::cmp::Reverse(v.b)));
    let mut best = EssentialityClass::from_vectors(&[]);
    for &l in &central {
        let lambda: Vec<LatticeVec> = shifts
            .iter()
            .copied()
            .filter(|v| {
                let (di, dj) = (v.a * res as i64, v.b * res as i64);
                (0..rows as i64).any(|j| {
                    let tj = j + dj;
                    tj >= 0
                        && tj < rows as i64
                        && (0..cols as i64).any(|i| {
                            let ti = i + di;
                            ti >= 0
                                && ti < cols as i64
                                && labels[j as usize * cols + i as usize] == l
                                && labels[tj as usize * cols + ti as usize] == l
                        })
                })
            })
            .collect();
        let class = EssentialityClass::from_vectors(&lambda);
        if class.rank > best.rank {
            best = class;
        }
    }
    Ok(best)
}
