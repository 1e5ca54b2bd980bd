use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::segment::{point_segment_dist, segment_contact, segment_dist, Contact};
use super::{Vec2, GEOM_TOL};
use crate::error::{invalid, Error, Result};

/// An arc or loop in the plane given by its vertices.
///
/// A polyline is closed exactly when its first and last vertices coincide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Vec2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(invalid("a polyline needs at least two vertices"));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("non-finite vertex {p}")));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("repeated consecutive vertex {}", w[0])));
        }
        Ok(Polyline { vertices })
    }

    /// Closed polyline through `vertices`, appending the first vertex if needed.
    pub fn closed(mut vertices: Vec<Vec2>) -> Result<Self> {
        if let (Some(&first), Some(&last)) = (vertices.first(), vertices.last()) {
            if first != last {
                vertices.push(first);
            }
        }
        if vertices.len() < 4 {
            return Err(invalid("a closed polyline needs at least three distinct vertices"));
        }
        Polyline::new(vertices)
    }

    /// Straight segment from `a` to `b`.
    pub fn segment(a: Vec2, b: Vec2) -> Result<Self> {
        Polyline::new(vec![a, b])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn start(&self) -> Vec2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Vec2 {
        *self.vertices.last().expect("polyline is nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn translate(&self, v: Vec2) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|&p| p + v).collect(),
        }
    }

    /// The reversed arc `t -> gamma(1 - t)`.
    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline { vertices }
    }

    /// Concatenation `self * other`; requires `self.end() == other.start()`.
    pub fn concat(&self, other: &Polyline) -> Result<Polyline> {
        if self.end().dist(other.start()) > GEOM_TOL {
            return Err(invalid("concatenated arcs must share the junction point"));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Polyline { vertices })
    }

    /// Minimum distance from `z` to the image of the arc.
    pub fn distance_to(&self, z: Vec2) -> f64 {
        self.segments()
            .map(|(a, b)| point_segment_dist(z, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Cumulative arclength at each vertex.
    fn cumulative_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.vertices.len());
        out.push(0.0);
        for (a, b) in self.segments() {
            acc += a.dist(b);
            out.push(acc);
        }
        out
    }

    /// Point at normalised arclength parameter `t` in `[0, 1]`.
    pub fn point_at(&self, t: f64) -> Vec2 {
        let cum = self.cumulative_lengths();
        point_at_cum(&self.vertices, &cum, t)
    }

    /// Sub-arc between normalised arclength parameters, oriented from `from` to `to`.
    pub fn sub_arc(&self, from: f64, to: f64) -> Result<Polyline> {
        let cum = self.cumulative_lengths();
        sub_arc_cum(&self.vertices, &cum, from, to)
    }
}

fn point_at_cum(vertices: &[Vec2], cum: &[f64], t: f64) -> Vec2 {
    let total = *cum.last().unwrap();
    let target = t.clamp(0.0, 1.0) * total;
    let idx = match cum.binary_search_by(|c| c.partial_cmp(&target).unwrap()) {
        Ok(i) => return vertices[i],
        Err(i) => i.clamp(1, vertices.len() - 1),
    };
    let (c0, c1) = (cum[idx - 1], cum[idx]);
    let u = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
    vertices[idx - 1] + (vertices[idx] - vertices[idx - 1]) * u
}

fn sub_arc_cum(vertices: &[Vec2], cum: &[f64], from: f64, to: f64) -> Result<Polyline> {
    let total = *cum.last().unwrap();
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    let mut pts = vec![point_at_cum(vertices, cum, lo)];
    for (p, &c) in vertices.iter().zip(cum) {
        let t = c / total;
        if t > lo && t < hi {
            pts.push(*p);
        }
    }
    pts.push(point_at_cum(vertices, cum, hi));
    pts.dedup_by(|b, a| a.dist(*b) < 1e-12);
    if pts.len() < 2 {
        return Err(Error::Resolution("sub-arc collapsed to a point".into()));
    }
    if from > to {
        pts.reverse();
    }
    Polyline::new(pts)
}

/// Total signed angle, in revolutions, swept by `(gamma(t) - z) / |gamma(t) - z|`.
///
/// Each straight segment avoiding `z` subtends strictly less than half a
/// revolution, so the per-segment `atan2` increment is the true increment.
/// Closed polylines return the (integer) winding number.
pub fn index_of_arc(gamma: &Polyline, z: Vec2) -> Result<f64> {
    let d = gamma.distance_to(z);
    if d <= GEOM_TOL {
        return Err(Error::DegenerateGeometry(format!(
            "point {z} lies within {d:e} of the arc"
        )));
    }
    let mut total = 0.0;
    for (a, b) in gamma.segments() {
        let (p, q) = (a - z, b - z);
        total += p.cross(q).atan2(p.dot(q));
    }
    let revs = total / TAU;
    if gamma.is_closed() {
        Ok(revs.round())
    } else {
        Ok(revs)
    }
}

/// Whether the images of `p` and `q` meet (touching counts).
pub fn arcs_intersect(p: &Polyline, q: &Polyline) -> bool {
    let (plo, phi) = p.bbox();
    let (qlo, qhi) = q.bbox();
    if plo.x > qhi.x + GEOM_TOL || qlo.x > phi.x + GEOM_TOL || plo.y > qhi.y + GEOM_TOL || qlo.y > phi.y + GEOM_TOL {
        return false;
    }
    p.segments().any(|(a, b)| {
        let lo = Vec2::new(a.x.min(b.x) - GEOM_TOL, a.y.min(b.y) - GEOM_TOL);
        let hi = Vec2::new(a.x.max(b.x) + GEOM_TOL, a.y.max(b.y) + GEOM_TOL);
        q.segments().any(|(c, d)| {
            if c.x.max(d.x) < lo.x || c.x.min(d.x) > hi.x || c.y.max(d.y) < lo.y || c.y.min(d.y) > hi.y {
                return false;
            }
            segment_dist(a, b, c, d) <= GEOM_TOL
        })
    })
}

/// A sub-arc joining some `x` to `x + v` that meets its `v`-translate only at `x + v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationArc {
    /// Normalised arclength parameter of `x` on the source arc.
    pub s: f64,
    /// Normalised arclength parameter of `x + v` on the source arc.
    pub t: f64,
    /// The sub-arc, oriented from `x` to `x + v`.
    pub arc: Polyline,
}

/// Extract a translation arc from an arc joining `y` to `y + v`.
///
/// Among all parameter pairs with `gamma(t) - gamma(s) = v` the one with the
/// smallest `|s - t|` is selected; on a polyline the solution set is a finite
/// union of points and segments in parameter space, solved exactly per pair of
/// edges.
pub fn find_translation_arc(gamma: &Polyline, v: Vec2) -> Result<TranslationArc> {
    let scale = v.norm().max(1.0);
    if v.norm() <= GEOM_TOL {
        return Err(invalid("translation vector must be nonzero"));
    }
    let mismatch = (gamma.end() - gamma.start() - v).norm();
    if mismatch > GEOM_TOL * scale {
        return Err(invalid(format!(
            "arc endpoints differ by {} rather than {v}",
            gamma.end() - gamma.start()
        )));
    }
    let verts = gamma.vertices();
    let cum = gamma.cumulative_lengths();
    let total = *cum.last().unwrap();

    // (|s - t|, min(s, t), s, t)
    let mut best: Option<(f64, f64, f64, f64)> = None;
    let mut consider = |s: f64, t: f64| {
        let gap = (s - t).abs();
        if gap <= 1e-15 {
            return;
        }
        let key = (gap, s.min(t));
        let better = match best {
            None => true,
            Some((g, m, _, _)) => key.0 < g - 1e-12 || ((key.0 - g).abs() <= 1e-12 && key.1 < m - 1e-12),
        };
        if better {
            best = Some((gap, s.min(t), s, t));
        }
    };
    // The whole arc always solves the equation.
    consider(0.0, 1.0);

    let nseg = verts.len() - 1;
    for i in 0..nseg {
        let (pi, di) = (verts[i], verts[i + 1] - verts[i]);
        let li = cum[i + 1] - cum[i];
        for j in 0..nseg {
            let (pj, dj) = (verts[j], verts[j + 1] - verts[j]);
            let lj = cum[j + 1] - cum[j];
            let c = v - pj + pi;
            let param = |u: f64, w: f64| ((cum[i] + u * li) / total, (cum[j] + w * lj) / total);
            let det = di.cross(dj);
            if det.abs() > 1e-14 * li * lj {
                let w = di.cross(c) / det;
                let u = dj.cross(c) / det;
                let e = 1e-12;
                if (-e..=1.0 + e).contains(&u) && (-e..=1.0 + e).contains(&w) {
                    let (s, t) = param(u.clamp(0.0, 1.0), w.clamp(0.0, 1.0));
                    consider(s, t);
                }
            } else {
                // Parallel edges: solutions form an interval (or nothing).
                if di.cross(c).abs() > GEOM_TOL * li {
                    continue;
                }
                let n2 = di.norm_sq();
                let lambda = dj.dot(di) / n2;
                let kappa = c.dot(di) / n2;
                // u = lambda * w - kappa with u, w in [0, 1].
                let (a, b) = if lambda > 0.0 {
                    (kappa / lambda, (1.0 + kappa) / lambda)
                } else {
                    ((1.0 + kappa) / lambda, kappa / lambda)
                };
                let w_lo = a.max(0.0);
                let w_hi = b.min(1.0);
                if w_lo > w_hi + 1e-12 {
                    continue;
                }
                for w in [w_lo.min(w_hi), w_hi] {
                    let w = w.clamp(0.0, 1.0);
                    let u = (lambda * w - kappa).clamp(0.0, 1.0);
                    let (s, t) = param(u, w);
                    consider(s, t);
                }
            }
        }
    }

    let (_, _, s, t) = best.ok_or_else(|| Error::Resolution("no parameter pair maps onto v".into()))?;
    let arc = sub_arc_cum(verts, &cum, s, t)?;
    Ok(TranslationArc { s, t, arc })
}

/// Direct check of the translation-arc property `[a] ∩ ([a] + v) = {a(0) + v}`.
pub fn is_translation_arc(arc: &Polyline, v: Vec2) -> bool {
    let tol = 10.0 * GEOM_TOL * v.norm().max(1.0);
    if (arc.end() - arc.start() - v).norm() > tol {
        return false;
    }
    let target = arc.end();
    let moved = arc.translate(v);
    for (a, b) in arc.segments() {
        for (c, d) in moved.segments() {
            match segment_contact(a, b, c, d) {
                Contact::None => {}
                Contact::Point(p) => {
                    if p.dist(target) > tol {
                        return false;
                    }
                }
                Contact::Overlap(..) => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn regular_polygon(n: usize) -> Polyline {
        let pts = (0..n).map(|k| Vec2::from_angle(TAU * k as f64 / n as f64)).collect();
        Polyline::closed(pts).unwrap()
    }

    #[test]
    fn winding_of_regular_polygon() {
        let loop64 = regular_polygon(64);
        assert_eq!(index_of_arc(&loop64, Vec2::ZERO).unwrap(), 1.0);
        assert_eq!(index_of_arc(&loop64.reversed(), Vec2::ZERO).unwrap(), -1.0);
        assert_eq!(index_of_arc(&loop64, v(3.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn partial_index_examples() {
        let quarter = Polyline::segment(v(1.0, 0.0), v(0.0, 1.0)).unwrap();
        assert!((index_of_arc(&quarter, Vec2::ZERO).unwrap() - 0.25).abs() < 1e-15);
        let eighth = Polyline::segment(v(1.0, 0.0), v(1.0, 1.0)).unwrap();
        assert!((index_of_arc(&eighth, Vec2::ZERO).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn index_rejects_points_on_the_arc() {
        let seg = Polyline::segment(v(-1.0, 0.0), v(1.0, 0.0)).unwrap();
        assert!(matches!(index_of_arc(&seg, Vec2::ZERO), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn polyline_validation() {
        assert!(Polyline::new(vec![v(0.0, 0.0)]).is_err());
        assert!(Polyline::new(vec![v(0.0, 0.0), v(0.0, 0.0), v(1.0, 0.0)]).is_err());
        assert!(Polyline::new(vec![v(0.0, 0.0), v(f64::NAN, 0.0)]).is_err());
        let sq = Polyline::closed(vec![v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)]).unwrap();
        assert!(sq.is_closed());
    }

    #[test]
    fn intersection_examples() {
        let seg = Polyline::segment(v(0.0, 0.0), v(2.0, 0.0)).unwrap();
        assert!(arcs_intersect(&seg, &seg.translate(v(1.0, 0.0))));
        assert!(!arcs_intersect(&seg, &seg.translate(v(3.0, 0.0))));
        assert!(arcs_intersect(&seg, &seg.translate(v(2.0, 0.0))));
    }

    #[test]
    fn straight_segment_is_its_own_translation_arc() {
        let seg = Polyline::segment(v(0.0, 0.0), v(1.0, 0.0)).unwrap();
        let ta = find_translation_arc(&seg, v(1.0, 0.0)).unwrap();
        assert_eq!((ta.s, ta.t), (0.0, 1.0));
        assert_eq!(ta.arc, seg);
        assert!(is_translation_arc(&ta.arc, v(1.0, 0.0)));
    }

    #[test]
    fn monotone_graph_is_its_own_translation_arc() {
        let pts: Vec<Vec2> = (0..=200)
            .map(|k| {
                let x = k as f64 / 200.0;
                v(x, 0.3 * (TAU * x).sin())
            })
            .collect();
        let graph = Polyline::new(pts).unwrap();
        let ta = find_translation_arc(&graph, v(1.0, 0.0)).unwrap();
        assert!((ta.s - 0.0).abs() < 1e-12 && (ta.t - 1.0).abs() < 1e-12, "{ta:?}");
        assert!(is_translation_arc(&ta.arc, v(1.0, 0.0)));
    }

    /// Brute force over a fine parameter grid: every pair `(s, t)` with
    /// `gamma(t) - gamma(s) = v` (to grid accuracy) and the smallest gap.
    fn brute_force_min_gap(gamma: &Polyline, v: Vec2, n: usize) -> f64 {
        let pts: Vec<Vec2> = (0..=n).map(|k| gamma.point_at(k as f64 / n as f64)).collect();
        let mut best = f64::INFINITY;
        for (i, p) in pts.iter().enumerate() {
            for (j, q) in pts.iter().enumerate() {
                if i != j && (*q - *p - v).norm() < 1e-9 {
                    best = best.min((i as f64 - j as f64).abs() / n as f64);
                }
            }
        }
        best
    }

    #[test]
    fn self_overlapping_arc_yields_proper_sub_arc() {
        let gamma = Polyline::new(vec![v(0.0, 0.0), v(2.0, 0.0), v(2.0, 1.0), v(1.0, 1.0), v(1.0, 0.0)]).unwrap();
        let shift = v(1.0, 0.0);
        let ta = find_translation_arc(&gamma, shift).unwrap();
        // Length 5 parametrised on [0, 1]; grid step 1/1000 hits all vertices.
        let oracle = brute_force_min_gap(&gamma, shift, 1000);
        assert!((oracle - 0.2).abs() < 1e-12);
        assert!(((ta.s - ta.t).abs() - oracle).abs() < 1e-12);
        assert!((ta.s - ta.t).abs() < 1.0);
        assert!(is_translation_arc(&ta.arc, shift));
        assert!((ta.arc.end() - ta.arc.start() - shift).norm() < 1e-12);
    }

    #[test]
    fn translation_arc_rejects_endpoint_mismatch() {
        let seg = Polyline::segment(v(0.0, 0.0), v(1.0, 0.0)).unwrap();
        assert!(matches!(find_translation_arc(&seg, v(0.5, 0.0)), Err(Error::InvalidArgument(_))));
    }

    fn arb_polyline(closed: bool) -> impl Strategy<Value = Polyline> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..12).prop_filter_map("degenerate", move |pts| {
            let pts: Vec<Vec2> = pts.into_iter().map(|(x, y)| v(x, y)).collect();
            if closed {
                Polyline::closed(pts).ok()
            } else {
                Polyline::new(pts).ok()
            }
        })
    }

    proptest! {
        #[test]
        fn closed_loops_have_integer_index(gamma in arb_polyline(true), zx in -4.0f64..4.0, zy in -4.0f64..4.0) {
            let z = v(zx, zy);
            prop_assume!(gamma.distance_to(z) > 1e-6);
            let open = Polyline::new(gamma.vertices().to_vec()).unwrap();
            let mut raw = 0.0;
            for (a, b) in open.segments() {
                raw += (a - z).cross(b - z).atan2((a - z).dot(b - z));
            }
            let raw = raw / TAU;
            prop_assert!((raw - raw.round()).abs() < 1e-9);
            prop_assert_eq!(index_of_arc(&gamma, z).unwrap(), raw.round());
        }

        #[test]
        fn index_is_additive(p in arb_polyline(false), q in arb_polyline(false), zx in -4.0f64..4.0, zy in -4.0f64..4.0) {
            let z = v(zx, zy);
            let q = q.translate(p.end() - q.start());
            prop_assume!(p.distance_to(z) > 1e-6 && q.distance_to(z) > 1e-6);
            let joined = p.concat(&q).unwrap();
            prop_assume!(!joined.is_closed());
            let lhs = index_of_arc(&joined, z).unwrap();
            let rhs = index_of_arc(&p, z).unwrap() + index_of_arc(&q, z).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }

        #[test]
        fn segments_sweep_less_than_half_a_turn(ax in -5.0f64..5.0, ay in -5.0f64..5.0, bx in -5.0f64..5.0, by in -5.0f64..5.0, zx in -5.0f64..5.0, zy in -5.0f64..5.0) {
            prop_assume!((ax, ay) != (bx, by));
            let seg = Polyline::segment(v(ax, ay), v(bx, by)).unwrap();
            let z = v(zx, zy);
            prop_assume!(seg.distance_to(z) > 1e-6);
            prop_assert!(index_of_arc(&seg, z).unwrap().abs() < 0.5);
        }
    }
}
