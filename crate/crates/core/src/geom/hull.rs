use serde::{Deserialize, Serialize};

use super::segment::point_segment_dist;
use super::{Vec2, GEOM_TOL};
use crate::error::{invalid, Result};

/// Convex polygon with vertices in counter-clockwise order.
///
/// Degenerate hulls (a single point or a segment) are kept with one or two
/// vertices respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn area(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Area centroid, or the vertex mean for degenerate hulls.
    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len();
        let a = self.area();
        if a <= GEOM_TOL * GEOM_TOL {
            let sum = self.vertices.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
            return sum / n as f64;
        }
        let mut c = Vec2::ZERO;
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            c += (p + q) * p.cross(q);
        }
        c / (6.0 * a)
    }

    /// Largest distance between two points of the hull.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max(p.dist(*q));
            }
        }
        d
    }

    /// Support function `max <x, u>` over the hull.
    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest `|<x, u>|` bound: `max |<x, u>|` over the hull.
    pub fn max_abs_projection(&self, u: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.dot(u).abs())
            .fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices[1..] {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let n = self.vertices.len();
        let edge_dist = match n {
            1 => p.dist(self.vertices[0]),
            2 => point_segment_dist(p, self.vertices[0], self.vertices[1]),
            _ => (0..n)
                .map(|i| point_segment_dist(p, self.vertices[i], self.vertices[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min),
        };
        if n >= 3 && self.contains(p) {
            edge_dist
        } else {
            -edge_dist
        }
    }

    /// Closed containment with tolerance `GEOM_TOL`.
    pub fn contains(&self, p: Vec2) -> bool {
        let n = self.vertices.len();
        match n {
            1 => p.dist(self.vertices[0]) <= GEOM_TOL,
            2 => point_segment_dist(p, self.vertices[0], self.vertices[1]) <= GEOM_TOL,
            _ => (0..n).all(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let e = b - a;
                e.cross(p - a) >= -GEOM_TOL * e.norm()
            }),
        }
    }
}

/// Convex hull by Andrew's monotone chain.
pub fn convex_hull(points: &[Vec2]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(invalid("convex hull of an empty set"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(invalid("non-finite point in hull input"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Ok(ConvexPolygon { vertices: pts });
    }
    let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // All points collinear: keep the two extremes.
        let (a, b) = (pts[0], *pts.last().unwrap());
        return Ok(ConvexPolygon { vertices: vec![a, b] });
    }
    Ok(ConvexPolygon { vertices: lower })
}

/// Uniform bucket grid for radius queries over a point cloud.
struct Buckets {
    origin: Vec2,
    cell: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<Vec2>>,
}

impl Buckets {
    fn new(points: &[Vec2], cell: f64) -> Self {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let cols = (((hi.x - lo.x) / cell).floor() as usize + 1).min(1 << 12);
        let rows = (((hi.y - lo.y) / cell).floor() as usize + 1).min(1 << 12);
        let cell = cell.max((hi.x - lo.x) / cols as f64).max((hi.y - lo.y) / rows as f64);
        let mut cells = vec![Vec::new(); cols * rows];
        let mut b = Buckets { origin: lo, cell, cols, rows, cells: Vec::new() };
        for &p in points {
            let (i, j) = b.index(p);
            cells[j * cols + i].push(p);
        }
        b.cells = cells;
        b
    }

    fn index(&self, p: Vec2) -> (usize, usize) {
        let i = ((p.x - self.origin.x) / self.cell).floor().clamp(0.0, (self.cols - 1) as f64) as usize;
        let j = ((p.y - self.origin.y) / self.cell).floor().clamp(0.0, (self.rows - 1) as f64) as usize;
        (i, j)
    }

    /// Whether some point lies strictly within `r` of `c`.
    fn any_within(&self, c: Vec2, r: f64) -> bool {
        let reach = (r / self.cell).ceil() as isize + 1;
        let ci = ((c.x - self.origin.x) / self.cell).floor() as isize;
        let cj = ((c.y - self.origin.y) / self.cell).floor() as isize;
        for j in (cj - reach).max(0)..=(cj + reach).min(self.rows as isize - 1) {
            for i in (ci - reach).max(0)..=(ci + reach).min(self.cols as isize - 1) {
                if self.cells[j as usize * self.cols + i as usize].iter().any(|p| p.dist(c) < r) {
                    return true;
                }
            }
        }
        false
    }
}

/// Sampled test of r-quasiconvexity: every open ball of radius `r` inside the
/// convex hull of `points` must contain a point.
///
/// Ball centres run over a grid of pitch `min(r / 4, extent / samples)`.
pub fn is_r_quasiconvex(points: &[Vec2], r: f64, samples: usize) -> Result<bool> {
    if points.is_empty() {
        return Err(invalid("quasiconvexity of an empty set"));
    }
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let hull = convex_hull(points)?;
    if hull.is_degenerate() {
        return Ok(true);
    }
    let (lo, hi) = hull.bbox();
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let mut pitch = r / 4.0;
    if samples > 0 {
        pitch = pitch.min(extent / samples as f64);
    }
    let buckets = Buckets::new(points, r.max(pitch));
    let nx = ((hi.x - lo.x) / pitch).ceil() as usize;
    let ny = ((hi.y - lo.y) / pitch).ceil() as usize;
    for j in 0..=ny {
        for i in 0..=nx {
            let c = Vec2::new(lo.x + i as f64 * pitch, lo.y + j as f64 * pitch);
            if hull.signed_distance(c) >= r && !buckets.any_within(c, r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
