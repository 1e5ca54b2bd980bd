//! Raster set algebra over lattice-aligned windows of the plane.

mod build;
mod io;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use build::{
    essentiality_class, fixed_region, fixed_region_tolerance, omega_region, u_epsilon_region, EssentialityClass,
    EssentialityKind, OmegaVariant, UEpsilon,
};
pub use io::{read_trgr, write_png, write_trgr, RegionSummary, TRGR_HEADER_LEN, TRGR_MAGIC, TRGR_VERSION};

use crate::error::{invalid, Result};
use crate::geom::{LatticeVec, Rect, Vec2};

/// Smallest accepted resolution (cells per unit length).
pub const MIN_RESOLUTION: u32 = 8;

/// Rectangle `[x0, x1] x [y0, y1]` with integer corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl Window {
    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 {
            return Err(invalid(format!("empty window [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Window { x0, x1, y0, y1 })
    }

    /// `[-half, half]²`.
    pub fn square(half: i64) -> Result<Self> {
        Window::new(-half, half, -half, half)
    }

    /// Window from real corners, which must be integers.
    pub fn from_reals(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let to_int = |c: f64| {
            if c.fract() != 0.0 || !c.is_finite() || c.abs() > 1e6 {
                Err(invalid(format!("window corner {c} is not an integer")))
            } else {
                Ok(c as i64)
            }
        };
        Window::new(to_int(x0)?, to_int(x1)?, to_int(y0)?, to_int(y1)?)
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new((self.x0 + self.x1) as f64 / 2.0, (self.y0 + self.y1) as f64 / 2.0)
    }

    pub fn rect(&self) -> Rect {
        Rect { x0: self.x0 as f64, x1: self.x1 as f64, y0: self.y0 as f64, y1: self.y1 as f64 }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.rect().contains(p)
    }
}

/// Boolean raster over a window; cell `(i, j)` has centre
/// `(x0 + (i + 1/2) / res, y0 + (j + 1/2) / res)` and row 0 is at the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRegion {
    window: Window,
    resolution: u32,
    cols: usize,
    rows: usize,
    bits: Vec<bool>,
}

const N4: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const N8: [(isize, isize); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

impl GridRegion {
    pub fn empty(window: Window, resolution: u32) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(invalid(format!("resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
        }
        let cols = (window.width() as usize)
            .checked_mul(resolution as usize)
            .ok_or_else(|| invalid("raster too large"))?;
        let rows = (window.height() as usize)
            .checked_mul(resolution as usize)
            .ok_or_else(|| invalid("raster too large"))?;
        if cols.saturating_mul(rows) > 1 << 30 {
            return Err(invalid("raster too large"));
        }
        Ok(GridRegion { window, resolution, cols, rows, bits: vec![false; cols * rows] })
    }

    pub fn full(window: Window, resolution: u32) -> Result<Self> {
        let mut g = GridRegion::empty(window, resolution)?;
        g.bits.fill(true);
        Ok(g)
    }

    pub(crate) fn from_bits(window: Window, resolution: u32, bits: Vec<bool>) -> Result<Self> {
        let mut g = GridRegion::empty(window, resolution)?;
        if bits.len() != g.bits.len() {
            return Err(invalid("bitmap size does not match window and resolution"));
        }
        g.bits = bits;
        Ok(g)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.cols + i]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[j * self.cols + i] = value;
    }

    pub fn cell_size(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Vec2 {
        let r = self.resolution as f64;
        Vec2::new(
            self.window.x0 as f64 + (i as f64 + 0.5) / r,
            self.window.y0 as f64 + (j as f64 + 0.5) / r,
        )
    }

    pub fn cell_center_of_index(&self, k: usize) -> Vec2 {
        self.cell_center(k % self.cols, k / self.cols)
    }

    /// Cell containing `p`, if `p` lies in the window.
    pub fn cell_of(&self, p: Vec2) -> Option<(usize, usize)> {
        let r = self.resolution as f64;
        let fi = ((p.x - self.window.x0 as f64) * r).floor();
        let fj = ((p.y - self.window.y0 as f64) * r).floor();
        if !(fi >= 0.0 && fj >= 0.0 && fi < self.cols as f64 && fj < self.rows as f64) {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    pub fn index_of(&self, p: Vec2) -> Option<usize> {
        self.cell_of(p).map(|(i, j)| j * self.cols + i)
    }

    /// Whether the cell containing `p` is marked (false outside the window).
    pub fn contains_point(&self, p: Vec2) -> bool {
        self.index_of(p).is_some_and(|k| self.bits[k])
    }

    pub fn marked_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k)
    }

    pub fn marked_centers(&self) -> Vec<Vec2> {
        self.marked_indices().map(|k| self.cell_center_of_index(k)).collect()
    }

    fn check_compatible(&self, other: &GridRegion) -> Result<()> {
        if self.window != other.window || self.resolution != other.resolution {
            return Err(invalid("rasters differ in window or resolution"));
        }
        Ok(())
    }

    fn zip_with(&self, other: &GridRegion, op: impl Fn(bool, bool) -> bool) -> Result<GridRegion> {
        self.check_compatible(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect();
        Ok(GridRegion { bits, ..self.clone() })
    }

    pub fn union(&self, other: &GridRegion) -> Result<GridRegion> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &GridRegion) -> Result<GridRegion> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &GridRegion) -> Result<GridRegion> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> GridRegion {
        GridRegion { bits: self.bits.iter().map(|b| !b).collect(), ..self.clone() }
    }

    pub fn intersects(&self, other: &GridRegion) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.bits.iter().zip(&other.bits).any(|(&a, &b)| a && b))
    }

    pub fn is_subset(&self, other: &GridRegion) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b))
    }

    /// Translate by an integer vector; cells leaving the window are dropped.
    pub fn translate(&self, v: LatticeVec) -> GridRegion {
        let r = self.resolution as i64;
        let (di, dj) = (v.a * r, v.b * r);
        let mut out = GridRegion { bits: vec![false; self.bits.len()], ..self.clone() };
        for j in 0..self.rows {
            let tj = j as i64 + dj;
            if tj < 0 || tj >= self.rows as i64 {
                continue;
            }
            for i in 0..self.cols {
                let ti = i as i64 + di;
                if ti < 0 || ti >= self.cols as i64 {
                    continue;
                }
                if self.get(i, j) {
                    out.set(ti as usize, tj as usize, true);
                }
            }
        }
        out
    }

    /// Whether `self` meets `self + v` (within the window).
    pub fn meets_translate(&self, v: LatticeVec) -> bool {
        let r = self.resolution as i64;
        let (di, dj) = (v.a * r, v.b * r);
        for j in 0..self.rows as i64 {
            let sj = j - dj;
            if sj < 0 || sj >= self.rows as i64 {
                continue;
            }
            for i in 0..self.cols as i64 {
                let si = i - di;
                if si < 0 || si >= self.cols as i64 {
                    continue;
                }
                if self.get(i as usize, j as usize) && self.get(si as usize, sj as usize) {
                    return true;
                }
            }
        }
        false
    }

    fn on_border(&self, k: usize) -> bool {
        let (i, j) = (k % self.cols, k / self.cols);
        i == 0 || j == 0 || i + 1 == self.cols || j + 1 == self.rows
    }

    /// Whether some marked cell lies on the outer ring of the window.
    pub fn touches_boundary(&self) -> bool {
        self.marked_indices().any(|k| self.on_border(k))
    }

    /// Label connected components of cells whose bit equals `value`.
    ///
    /// Returns per-cell labels (`u32::MAX` for other cells) and the number of components.
    fn label(&self, value: bool, neighbours: &[(isize, isize)]) -> (Vec<u32>, usize) {
        let mut labels = vec![u32::MAX; self.bits.len()];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.bits.len() {
            if self.bits[start] != value || labels[start] != u32::MAX {
                continue;
            }
            labels[start] = next;
            queue.push_back(start);
            while let Some(k) = queue.pop_front() {
                let (i, j) = ((k % self.cols) as isize, (k / self.cols) as isize);
                for &(di, dj) in neighbours {
                    let (ni, nj) = (i + di, j + dj);
                    if ni < 0 || nj < 0 || ni >= self.cols as isize || nj >= self.rows as isize {
                        continue;
                    }
                    let nk = nj as usize * self.cols + ni as usize;
                    if self.bits[nk] == value && labels[nk] == u32::MAX {
                        labels[nk] = next;
                        queue.push_back(nk);
                    }
                }
            }
            next += 1;
        }
        (labels, next as usize)
    }

    fn extract(&self, labels: &[u32], keep: impl Fn(u32) -> bool) -> GridRegion {
        let bits = labels.iter().map(|&l| l != u32::MAX && keep(l)).collect();
        GridRegion { bits, ..self.clone() }
    }

    /// The 4-connected components, in order of their lowest cell index.
    pub fn components(&self) -> Vec<GridRegion> {
        let (labels, n) = self.label(true, &N4);
        (0..n as u32).map(|c| self.extract(&labels, |l| l == c)).collect()
    }

    pub fn component_count(&self) -> usize {
        self.label(true, &N4).1
    }

    /// The 8-connected components of the complement.
    pub fn complement_components(&self) -> Vec<GridRegion> {
        let (labels, n) = self.label(false, &N8);
        (0..n as u32).map(|c| self.extract(&labels, |l| l == c)).collect()
    }

    /// Union of the components touching the window boundary.
    pub fn unbounded_part(&self) -> GridRegion {
        let (labels, n) = self.label(true, &N4);
        let mut touching = vec![false; n];
        for k in 0..self.bits.len() {
            if labels[k] != u32::MAX && self.on_border(k) {
                touching[labels[k] as usize] = true;
            }
        }
        self.extract(&labels, |l| touching[l as usize])
    }

    /// Whether each cell lies within one cell (8-neighbourhood) of a cell with the other value.
    pub fn boundary_layer(&self) -> GridRegion {
        let mut out = GridRegion { bits: vec![false; self.bits.len()], ..self.clone() };
        for j in 0..self.rows as isize {
            for i in 0..self.cols as isize {
                let b = self.get(i as usize, j as usize);
                let edge = N8.iter().any(|&(di, dj)| {
                    let (ni, nj) = (i + di, j + dj);
                    ni >= 0
                        && nj >= 0
                        && ni < self.cols as isize
                        && nj < self.rows as isize
                        && self.get(ni as usize, nj as usize) != b
                });
                if edge {
                    out.set(i as usize, j as usize, true);
                }
            }
        }
        out
    }
}

/// Mark the cells whose centre satisfies `predicate`.
pub fn region_from_predicate(
    window: Window,
    resolution: u32,
    predicate: impl Fn(Vec2) -> bool + Sync,
) -> Result<GridRegion> {
    use rayon::prelude::*;
    let mut g = GridRegion::empty(window, resolution)?;
    let cols = g.cols;
    let proto = g.clone();
    g.bits
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(j, row)| {
            for (i, b) in row.iter_mut().enumerate() {
                *b = predicate(proto.cell_center(i, j));
            }
        });
    Ok(g)
}

/// Mark cells by a `Z²`-periodic predicate evaluated once per cell of the unit
/// square and tiled, so the result is exactly periodic.
pub fn region_from_periodic_predicate(
    window: Window,
    resolution: u32,
    predicate: impl Fn(Vec2) -> bool + Sync,
) -> Result<GridRegion> {
    let unit = GridRegion::empty(Window::new(0, 1, 0, 1)?, resolution)?;
    let tile = region_from_predicate(unit.window, resolution, predicate)?;
    tile_periodic(&tile, window)
}

/// Tile a raster of the unit square over `window`.
pub(crate) fn tile_periodic(tile: &GridRegion, window: Window) -> Result<GridRegion> {
    let res = tile.resolution as usize;
    let mut g = GridRegion::empty(window, tile.resolution)?;
    for j in 0..g.rows {
        for i in 0..g.cols {
            g.bits[j * g.cols + i] = tile.get(i % res, j % res);
        }
    }
    Ok(g)
}

/// The 4-connected component containing the cell of `seed`.
pub fn connected_component(region: &GridRegion, seed: Vec2) -> Result<GridRegion> {
    let k = region
        .index_of(seed)
        .ok_or_else(|| invalid(format!("seed {seed} lies outside the window")))?;
    if !region.bits[k] {
        return Err(invalid(format!("seed {seed} lies in an unmarked cell")));
    }
    let (labels, _) = region.label(true, &N4);
    let target = labels[k];
    Ok(region.extract(&labels, |l| l == target))
}

/// Add every complementary component that does not touch the window boundary.
pub fn fill_region(region: &GridRegion) -> Result<GridRegion> {
    let n = region.component_count();
    if n > 1 {
        return Err(invalid(format!("fill expects a connected region, found {n} components")));
    }
    Ok(fill_holes(region))
}

/// Fill without the connectivity precondition.
pub(crate) fn fill_holes(region: &GridRegion) -> GridRegion {
    let (labels, n) = region.label(false, &N8);
    let mut touching = vec![false; n];
    for k in 0..region.bits.len() {
        if labels[k] != u32::MAX && region.on_border(k) {
            touching[labels[k] as usize] = true;
        }
    }
    let bits = region
        .bits
        .iter()
        .zip(&labels)
        .map(|(&b, &l)| b || (l != u32::MAX && !touching[l as usize]))
        .collect();
    GridRegion { bits, ..region.clone() }
}
