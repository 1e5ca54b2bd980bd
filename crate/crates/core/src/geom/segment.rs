use super::{Vec2, GEOM_TOL};

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Distance between the closed segments `[a, b]` and `[c, d]`.
pub fn segment_dist(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return 0.0;
    }
    point_segment_dist(a, c, d)
        .min(point_segment_dist(b, c, d))
        .min(point_segment_dist(c, a, b))
        .min(point_segment_dist(d, a, b))
}

/// How two closed segments meet, up to [`GEOM_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    None,
    /// A single contact point.
    Point(Vec2),
    /// Collinear overlap along a sub-segment of positive length.
    Overlap(Vec2, Vec2),
}

/// Classify the contact of `[a, b]` and `[c, d]`.
pub fn segment_contact(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Contact {
    if segment_dist(a, b, c, d) > GEOM_TOL {
        return Contact::None;
    }
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if denom.abs() > 1e-12 * scale.max(1e-300) {
        // Transversal: the closest approach is a single point.
        let t = ((c - a).cross(s) / denom).clamp(0.0, 1.0);
        let u = ((c - a).cross(r) / denom).clamp(0.0, 1.0);
        let p = a + r * t;
        let q = c + s * u;
        // Near-misses at endpoints: pick the closest pair among endpoint projections.
        if p.dist(q) <= GEOM_TOL {
            return Contact::Point((p + q) * 0.5);
        }
        return closest_endpoint_contact(a, b, c, d);
    }
    // Parallel: project everything onto the longer direction.
    let (base, dir) = if r.norm_sq() >= s.norm_sq() { (a, r) } else { (c, s) };
    let len2 = dir.norm_sq();
    if len2 == 0.0 {
        return Contact::Point(a);
    }
    let param = |p: Vec2| (p - base).dot(dir) / len2;
    let (mut t0, mut t1) = (param(a), param(b));
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    let (mut u0, mut u1) = (param(c), param(d));
    if u0 > u1 {
        std::mem::swap(&mut u0, &mut u1);
    }
    let lo = t0.max(u0);
    let hi = t1.min(u1);
    let p = base + dir * lo;
    let q = base + dir * hi;
    if hi >= lo && p.dist(q) > GEOM_TOL {
        Contact::Overlap(p, q)
    } else if hi >= lo {
        Contact::Point((p + q) * 0.5)
    } else {
        // End-to-end within tolerance.
        closest_endpoint_contact(a, b, c, d)
    }
}

fn closest_endpoint_contact(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Contact {
    let candidates = [
        (point_segment_dist(a, c, d), a),
        (point_segment_dist(b, c, d), b),
        (point_segment_dist(c, a, b), c),
        (point_segment_dist(d, a, b), d),
    ];
    let (dist, p) = candidates
        .iter()
        .copied()
        .fold((f64::INFINITY, a), |acc, x| if x.0 < acc.0 { x } else { acc });
    if dist <= GEOM_TOL {
        Contact::Point(p)
    } else {
        Contact::None
    }
}
