//! Seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torusrot::chains::{ball_chain, ray_chain, strip_chain, ChainSample};
use torusrot::geom::{arcs_intersect, find_translation_arc, is_r_dense, LatticeVec, Polyline, Sigma, Vec2};
use torusrot::regions::{region_from_predicate, GridRegion, Window};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> Vec2 {
    Vec2::from_angle(rng.random_range(0.0..std::f64::consts::TAU))
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact-predicate test for closed segments `[p1,p2]` and `[q1,q2]`.
pub fn segments_meet(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

pub fn polylines_meet(p: &Polyline, q: &Polyline) -> bool {
    p.segments().any(|(a, b)| q.segments().any(|(c, d)| segments_meet(a, b, c, d)))
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Brute-force distance between two polylines (zero when they cross).
pub fn polyline_distance(p: &Polyline, q: &Polyline) -> f64 {
    if polylines_meet(p, q) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for (a, b) in p.segments() {
        for (c, d) in q.segments() {
            best = best
                .min(point_segment_distance(a, c, d))
                .min(point_segment_distance(b, c, d))
                .min(point_segment_distance(c, a, b))
                .min(point_segment_distance(d, a, b));
        }
    }
    best
}

/// Star-shaped simple polygon about `center` with `n` vertices.
pub fn random_star_polygon(rng: &mut ChaCha8Rng, center: Vec2, n: usize) -> Vec<Vec2> {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles.iter().map(|&a| center + Vec2::from_angle(a) * rng.random_range(0.3..2.0)).collect()
}

/// No two non-adjacent segments meet and adjacent ones do not fold back.
pub fn is_simple(p: &Polyline) -> bool {
    let segs: Vec<(Vec2, Vec2)> = p.segments().collect();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if j == i + 1 {
                let (a, b) = segs[i];
                let c = segs[j].1;
                if orient(a, b, c) == 0.0 && (c - b).dot(a - b) > 0.0 {
                    return false;
                }
            } else if segments_meet(segs[i].0, segs[i].1, segs[j].0, segs[j].1) {
                return false;
            }
        }
    }
    true
}

/// Even-odd ray casting against the closed polygon with vertices `poly`.
pub fn inside_polygon(poly: &[Vec2], z: Vec2) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > z.y) != (b.y > z.y) {
            let x = a.x + (z.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > z.x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Self-avoiding random walk of `steps` segments from `start`.
pub fn random_simple_arc(rng: &mut ChaCha8Rng, start: Vec2, steps: usize, scale: f64) -> Polyline {
    let mut pts = vec![start];
    let mut heading = rng.random_range(0.0..std::f64::consts::TAU);
    'grow: for _ in 0..steps {
        for _ in 0..30 {
            let turn = rng.random_range(-1.4..1.4);
            let len = scale * rng.random_range(0.3..1.0);
            let next = *pts.last().unwrap() + Vec2::from_angle(heading + turn) * len;
            let last = *pts.last().unwrap();
            let clash = pts.windows(2).take(pts.len().saturating_sub(2)).any(|w| segments_meet(w[0], w[1], last, next));
            if !clash {
                heading += turn;
                pts.push(next);
                continue 'grow;
            }
        }
        break;
    }
    if pts.len() < 2 {
        pts.push(start + Vec2::new(scale, 0.0));
    }
    Polyline::new(pts).expect("walk has distinct consecutive vertices")
}

/// Arcwise-connected union of polylines: a trunk with branches rooted at its vertices.
pub fn random_connected_set(rng: &mut ChaCha8Rng, start: Vec2, scale: f64) -> Vec<Polyline> {
    let steps = rng.random_range(2..7);
    let mut parts = vec![random_simple_arc(rng, start, steps, scale)];
    for _ in 0..rng.random_range(0..3) {
        let host = &parts[rng.random_range(0..parts.len())];
        let root = host.vertices()[rng.random_range(0..host.vertices().len())];
        let steps = rng.random_range(1..4);
        parts.push(random_simple_arc(rng, root, steps, scale));
    }
    parts
}

pub fn translate_set(k: &[Polyline], v: Vec2) -> Vec<Polyline> {
    k.iter().map(|p| p.translate(v)).collect()
}

pub fn sets_meet(k: &[Polyline], l: &[Polyline]) -> bool {
    k.iter().any(|p| l.iter().any(|q| arcs_intersect(p, q)))
}

pub fn set_meets_arc(k: &[Polyline], a: &Polyline) -> bool {
    k.iter().any(|p| arcs_intersect(p, a))
}

/// A simple arc `γ` from `z0` to `z1` meeting the chord only at its ends, and
/// `v` with `z0 + v` in the closed disk bounded by `γ` and the chord.
pub fn douady_instance(rng: &mut ChaCha8Rng) -> Option<(Polyline, Vec2)> {
    let steps = rng.random_range(3..12);
    let gamma = random_simple_arc(rng, Vec2::ZERO, steps, 1.0);
    if gamma.segment_count() < 2 || !is_simple(&gamma) {
        return None;
    }
    let (z0, z1) = (gamma.start(), gamma.end());
    if z0.dist(z1) < 0.3 {
        return None;
    }
    let segs: Vec<(Vec2, Vec2)> = gamma.segments().collect();
    let last = segs.len() - 1;
    for (i, &(a, b)) in segs.iter().enumerate() {
        let hits = segments_meet(a, b, z0, z1);
        let allowed = (i == 0 && orient(z0, z1, b) != 0.0) || (i == last && orient(z0, z1, a) != 0.0);
        if hits && !allowed {
            return None;
        }
    }
    let poly: Vec<Vec2> = gamma.vertices().to_vec();
    let p = match rng.random_range(0..10) {
        0 | 1 => z0 + (z1 - z0) * rng.random_range(0.05..=1.0),
        2 => gamma.point_at(rng.random_range(0.05..=1.0)),
        _ => {
            let (lo, hi) = bbox(&poly);
            let mut found = None;
            for _ in 0..200 {
                let q = Vec2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
                if inside_polygon(&poly, q) {
                    found = Some(q);
                    break;
                }
            }
            found?
        }
    };
    let v = p - z0;
    (v.norm() > 1e-6).then_some((gamma, v))
}

fn bbox(pts: &[Vec2]) -> (Vec2, Vec2) {
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// A connected set `K` and `v` with `K ∩ (K + v) = ∅`.
pub fn free_translate_instance(rng: &mut ChaCha8Rng) -> Option<(Vec<Polyline>, Vec2)> {
    let k = random_connected_set(rng, Vec2::ZERO, 1.0);
    let v = unit(rng) * rng.random_range(0.2..3.0);
    (!sets_meet(&k, &translate_set(&k, v))).then_some((k, v))
}

/// A simple arc from `y` to `y + v`.
pub fn arc_to_translate(rng: &mut ChaCha8Rng, y: Vec2, v: Vec2) -> Option<Polyline> {
    let inner = rng.random_range(1..6);
    let mut ts: Vec<f64> = (0..inner).map(|_| rng.random_range(-0.3..1.3)).collect();
    ts.sort_by(f64::total_cmp);
    let mut pts = vec![y];
    for t in ts {
        pts.push(y + v * t + v.perp() * rng.random_range(-0.8..0.8));
    }
    pts.push(y + v);
    let arc = Polyline::new(pts).ok()?;
    is_simple(&arc).then_some(arc)
}

/// `K`, `v` and a `T_v`-translation arc `α` with `K ∩ (K+v) = ∅` and `K ∩ α = ∅`.
pub fn half_orbit_instance(rng: &mut ChaCha8Rng) -> Option<(Vec<Polyline>, Vec2, Polyline)> {
    let v = unit(rng) * rng.random_range(0.8..2.0);
    let y = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let gamma = arc_to_translate(rng, y, v)?;
    let alpha = find_translation_arc(&gamma, v).ok()?.arc;
    let s = rng.random_range(-8.0..8.0);
    let start = y + v * s + v.perp() * rng.random_range(-0.6..0.6);
    let scale = v.norm() * rng.random_range(0.3..1.0);
    let k = random_connected_set(rng, start, scale);
    if sets_meet(&k, &translate_set(&k, v)) || set_meets_arc(&k, &alpha) {
        return None;
    }
    Some((k, v, alpha))
}

/// Brute-force check that `α ∩ (α + v) = {α(1)}` and that `α` is simple.
pub fn translation_arc_oracle(alpha: &Polyline, v: Vec2) -> bool {
    if !is_simple(alpha) || alpha.end().dist(alpha.start() + v) > 1e-9 {
        return false;
    }
    let moved = alpha.translate(v);
    let a: Vec<(Vec2, Vec2)> = alpha.segments().collect();
    let b: Vec<(Vec2, Vec2)> = moved.segments().collect();
    let tip = alpha.end();
    for (i, &(p1, p2)) in a.iter().enumerate() {
        for (j, &(q1, q2)) in b.iter().enumerate() {
            if !segments_meet(p1, p2, q1, q2) {
                continue;
            }
            if i + 1 != a.len() || j != 0 {
                // Touching exactly at the shared tip through a vertex is still a single point.
                let at_tip = |x: Vec2| x.dist(tip) < 1e-9;
                if !((at_tip(p2) || at_tip(p1)) && (at_tip(q1) || at_tip(q2))) {
                    return false;
                }
                continue;
            }
            let d = p2 - p1;
            if d.cross(q2 - q1).abs() <= 1e-12 * d.norm() * (q2 - q1).norm() {
                // Collinear: the overlap must shrink to the tip.
                let u = d / d.norm();
                let (lo_a, hi_a) = ((p1 - tip).dot(u).min((p2 - tip).dot(u)), (p1 - tip).dot(u).max((p2 - tip).dot(u)));
                let (lo_b, hi_b) = ((q1 - tip).dot(u).min((q2 - tip).dot(u)), (q1 - tip).dot(u).max((q2 - tip).dot(u)));
                if hi_a.min(hi_b) - lo_a.max(lo_b) > 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

/// Random 4-connected blob grown from a random cell, sometimes united with a ring.
pub fn random_connected_region(rng: &mut ChaCha8Rng, window: Window, resolution: u32) -> GridRegion {
    let mut g = GridRegion::empty(window, resolution).unwrap();
    let (cols, rows) = (g.cols(), g.rows());
    let seed = (rng.random_range(cols / 4..3 * cols / 4), rng.random_range(rows / 4..3 * rows / 4));
    g.set(seed.0, seed.1, true);
    let mut frontier = vec![seed];
    let target = rng.random_range(5..cols * rows / 6);
    let mut count = 1;
    while count < target && !frontier.is_empty() {
        let k = rng.random_range(0..frontier.len());
        let (i, j) = frontier[k];
        let dirs = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
        let (di, dj) = dirs[rng.random_range(0..4)];
        let (ni, nj) = (i as i64 + di, j as i64 + dj);
        if ni < 0 || nj < 0 || ni >= cols as i64 || nj >= rows as i64 {
            continue;
        }
        let (ni, nj) = (ni as usize, nj as usize);
        if !g.get(ni, nj) {
            g.set(ni, nj, true);
            frontier.push((ni, nj));
            count += 1;
        }
    }
    if rng.random_bool(0.3) {
        let c = g.cell_center(seed.0, seed.1);
        let r = rng.random_range(0.5..1.5);
        let w = rng.random_range(1.5..3.0) * g.cell_size();
        for j in 0..rows {
            for i in 0..cols {
                let d = g.cell_center(i, j).dist(c);
                if (d - r).abs() < w {
                    g.set(i, j, true);
                }
            }
        }
        g = torusrot::regions::connected_component(&g, c).unwrap();
    }
    g
}

const N4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const N8: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// BFS labelling of cells equal to `value` with the given neighbourhood.
pub fn label_oracle(g: &GridRegion, value: bool, eight: bool) -> Vec<Option<usize>> {
    let (cols, rows) = (g.cols(), g.rows());
    let nbrs: &[(i64, i64)] = if eight { &N8 } else { &N4 };
    let mut label = vec![None; cols * rows];
    let mut next = 0;
    for start in 0..cols * rows {
        if label[start].is_some() || g.get(start % cols, start / cols) != value {
            continue;
        }
        label[start] = Some(next);
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let (i, j) = ((k % cols) as i64, (k / cols) as i64);
            for (di, dj) in nbrs {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni >= cols as i64 || nj >= rows as i64 {
                    continue;
                }
                let m = nj as usize * cols + ni as usize;
                if label[m].is_none() && g.get(ni as usize, nj as usize) == value {
                    label[m] = Some(next);
                    queue.push_back(m);
                }
            }
        }
        next += 1;
    }
    label
}

/// Region plus the 8-connected complementary components that avoid the window border.
pub fn fill_oracle(g: &GridRegion) -> GridRegion {
    let (cols, rows) = (g.cols(), g.rows());
    let label = label_oracle(g, false, true);
    let mut outer = std::collections::HashSet::new();
    for j in 0..rows {
        for i in 0..cols {
            if i == 0 || j == 0 || i + 1 == cols || j + 1 == rows {
                if let Some(l) = label[j * cols + i] {
                    outer.insert(l);
                }
            }
        }
    }
    let mut out = g.clone();
    for j in 0..rows {
        for i in 0..cols {
            if let Some(l) = label[j * cols + i] {
                if !outer.contains(&l) {
                    out.set(i, j, true);
                }
            }
        }
    }
    out
}

/// Cell-by-cell check that `a` and `a + v` share a marked cell.
pub fn meets_translate_oracle(a: &GridRegion, v: LatticeVec) -> bool {
    let res = a.resolution() as i64;
    let (cols, rows) = (a.cols() as i64, a.rows() as i64);
    for j in 0..rows {
        for i in 0..cols {
            if !a.get(i as usize, j as usize) {
                continue;
            }
            let (si, sj) = (i - v.a * res, j - v.b * res);
            if si >= 0 && sj >= 0 && si < cols && sj < rows && a.get(si as usize, sj as usize) {
                return true;
            }
        }
    }
    false
}

/// Cells of `a` not in `b`, allowing misses adjacent (8-neighbourhood) to `b`.
pub fn subset_up_to_one_cell(a: &GridRegion, b: &GridRegion) -> bool {
    let (cols, rows) = (a.cols() as i64, a.rows() as i64);
    for j in 0..rows {
        for i in 0..cols {
            if !a.get(i as usize, j as usize) || b.get(i as usize, j as usize) {
                continue;
            }
            let near = N8.iter().any(|(di, dj)| {
                let (ni, nj) = (i + di, j + dj);
                ni >= 0 && nj >= 0 && ni < cols && nj < rows && b.get(ni as usize, nj as usize)
            });
            if !near {
                return false;
            }
        }
    }
    true
}

pub fn chain_window() -> Window {
    Window::square(4).unwrap()
}

/// Smallest listed radius at which `sigma` is dense in the window.
pub fn density_radius(sigma: &Sigma, window: Window) -> f64 {
    [0.75, 1.01, 1.5, 2.01, 3.01]
        .into_iter()
        .find(|&r| is_r_dense(sigma, r, &window.rect()).unwrap())
        .expect("sigma is not dense at any listed radius")
}

/// Tilted strips `|<z, n>| <= 1/(2(k+1))` around the line through the origin spanned by `dir`.
pub fn tilted_strip_chain(dir: LatticeVec, depth: usize) -> ChainSample {
    let n = dir.to_vec2().perp() / dir.to_vec2().norm();
    let levels: Vec<GridRegion> = (0..depth)
        .map(|k| region_from_predicate(chain_window(), 16, |z| z.dot(n).abs() <= 0.5 / (k as f64 + 1.0)).unwrap())
        .collect();
    ChainSample::new(levels, Sigma::NonZeroOffLine(dir)).unwrap()
}

pub fn chain_corpus() -> Vec<(&'static str, ChainSample)> {
    let mut out = Vec::new();
    for c in [Vec2::new(0.3, 0.2), Vec2::new(-1.5, 2.0), Vec2::ZERO] {
        out.push(("ball", ball_chain(c, 4, chain_window(), 16, Sigma::NonZero).unwrap()));
    }
    out.push(("ball", ball_chain(Vec2::new(0.5, 0.5), 3, chain_window(), 16, Sigma::NonZeroOffLine(LatticeVec::new(1, 1))).unwrap()));
    // Directions whose in-window lattice approximants stay at least 0.098 off the ray.
    for dir in [Vec2::new(1.0, 2f64.sqrt()), Vec2::new(-3f64.sqrt(), 1.0), Vec2::new(-5f64.sqrt(), -1.0)] {
        out.push(("ray", ray_chain(dir, 16, chain_window(), 64, Sigma::NonZero).unwrap()));
    }
    out.push(("strip", strip_chain(4, chain_window(), 16, Sigma::NonZeroOffLine(LatticeVec::new(1, 0))).unwrap()));
    out.push(("strip", tilted_strip_chain(LatticeVec::new(1, 1), 4)));
    out.push(("strip", tilted_strip_chain(LatticeVec::new(0, 1), 4)));
    out
}
