mod support;

use proptest::prelude::*;
use rand::Rng;
use support::*;
use torusrot::geom::{
    arcs_intersect, convex_hull, find_translation_arc, index_of_arc, is_r_dense, is_r_quasiconvex, is_translation_arc,
    Polyline, Rect, Sigma, Vec2,
};

const INSTANCES: usize = 1000;

/// Draw instances until `INSTANCES` are accepted, returning how many were drawn.
fn accepted<T>(seed: u64, mut make: impl FnMut(&mut rand_chacha::ChaCha8Rng) -> Option<T>, mut check: impl FnMut(&T) -> bool) -> usize {
    let mut r = rng(seed);
    let (mut done, mut drawn) = (0, 0);
    while done < INSTANCES {
        drawn += 1;
        assert!(drawn < 200 * INSTANCES, "generator acceptance rate too low");
        if let Some(inst) = make(&mut r) {
            assert!(check(&inst), "counterexample after {done} instances");
            done += 1;
        }
    }
    drawn
}

#[test]
fn douady_intersection() {
    accepted(11, douady_instance, |(gamma, v)| {
        let moved = gamma.translate(*v);
        arcs_intersect(gamma, &moved) && polyline_distance(gamma, &moved) <= 1e-12
    });
}

#[test]
fn free_translates_stay_free() {
    accepted(12, free_translate_instance, |(k, v)| {
        (1..=10).all(|n| {
            let n = n as f64;
            !sets_meet(k, &translate_set(k, *v * n)) && !sets_meet(k, &translate_set(k, *v * -n))
        })
    });
}

#[test]
fn half_orbit_avoidance() {
    let mut both_sides_touched_possible = 0;
    accepted(13, half_orbit_instance, |(k, v, alpha)| {
        let forward = (0..=20).all(|i| !set_meets_arc(k, &alpha.translate(*v * i as f64)));
        let backward = (0..=20).all(|i| !set_meets_arc(k, &alpha.translate(*v * -(i as f64))));
        if !(forward && backward) {
            both_sides_touched_possible += 1;
        }
        forward || backward
    });
    // The suite must exercise instances where `K` does meet the orbit.
    assert!(both_sides_touched_possible > 100, "only {both_sides_touched_possible} nontrivial instances");
}

#[test]
fn translation_arcs_are_valid() {
    accepted(
        14,
        |r| {
            let steps = r.random_range(2..10);
            let gamma = random_simple_arc(r, Vec2::ZERO, steps, 1.0);
            let v = gamma.end() - gamma.start();
            (v.norm() > 0.1 && is_simple(&gamma)).then_some((gamma, v))
        },
        |(gamma, v)| {
            let t = find_translation_arc(gamma, *v).unwrap();
            is_translation_arc(&t.arc, *v) && translation_arc_oracle(&t.arc, *v)
        },
    );
}

#[test]
fn translation_arc_of_looping_arc_is_proper() {
    let mut r = rng(15);
    let mut proper = 0;
    for _ in 0..300 {
        let v = unit(&mut r) * r.random_range(0.5..1.5);
        let Some(gamma) = arc_to_translate(&mut r, Vec2::ZERO, v) else { continue };
        let t = find_translation_arc(&gamma, v).unwrap();
        assert!(translation_arc_oracle(&t.arc, v));
        if t.t - t.s < 1.0 - 1e-9 {
            proper += 1;
        }
    }
    assert!(proper > 10);
}

#[test]
fn nonzero_loop_index_means_enclosed() {
    let mut r = rng(16);
    let mut enclosed = 0;
    for _ in 0..1000 {
        let n = r.random_range(3..16);
        let mut verts = random_star_polygon(&mut r, Vec2::ZERO, n);
        verts.push(verts[0]);
        let Ok(closed) = Polyline::new(verts.clone()) else { continue };
        if !is_simple_loop(&closed) {
            continue;
        }
        let z = Vec2::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let Ok(idx) = index_of_arc(&closed, z) else { continue };
        let inside = inside_polygon(&verts[..verts.len() - 1], z);
        if idx != 0.0 {
            enclosed += 1;
            assert!(inside, "index {idx} at {z} outside");
        } else {
            assert!(!inside, "zero index at enclosed {z}");
        }
    }
    assert!(enclosed > 50);
}

fn is_simple_loop(p: &Polyline) -> bool {
    let segs: Vec<(Vec2, Vec2)> = p.segments().collect();
    let n = segs.len();
    (0..n).all(|i| {
        (i + 1..n).all(|j| j == i + 1 || (i == 0 && j == n - 1) || !segments_meet(segs[i].0, segs[i].1, segs[j].0, segs[j].1))
    })
}

#[test]
fn arcs_intersect_matches_oracle() {
    let mut r = rng(17);
    let mut hits = 0;
    for _ in 0..2000 {
        let (na, nb) = (r.random_range(1..6), r.random_range(1..6));
        let a = random_simple_arc(&mut r, Vec2::ZERO, na, 1.0);
        let start = Vec2::new(r.random_range(-1.5..1.5), r.random_range(-1.5..1.5));
        let b = random_simple_arc(&mut r, start, nb, 1.0);
        let d = polyline_distance(&a, &b);
        if d > 0.0 && d < 1e-9 {
            continue;
        }
        hits += (d == 0.0) as usize;
        assert_eq!(arcs_intersect(&a, &b), d == 0.0);
    }
    assert!(hits > 200);
}

#[test]
fn hull_contains_every_point() {
    let mut r = rng(18);
    for _ in 0..100 {
        let pts: Vec<Vec2> = (0..r.random_range(1..60)).map(|_| Vec2::new(r.random_range(-2.0..2.0), r.random_range(-1.0..3.0))).collect();
        let hull = convex_hull(&pts).unwrap();
        for p in &pts {
            assert!(hull.signed_distance(*p) >= -1e-12, "{p} outside hull");
        }
    }
}

#[test]
fn l_shape_quasiconvexity_matches_ball_sampling() {
    let mut pts = Vec::new();
    for i in 0..=40 {
        for j in 0..=2 {
            pts.push(Vec2::new(i as f64 * 0.1, j as f64 * 0.1));
            pts.push(Vec2::new(j as f64 * 0.1, i as f64 * 0.1));
        }
    }
    // Oracle: an empty ball of radius 0.5 fits in the hull at (1.5, 1.5).
    let hull = convex_hull(&pts).unwrap();
    let c = Vec2::new(1.5, 1.5);
    assert!(hull.signed_distance(c) >= 0.5 && pts.iter().all(|p| p.dist(c) >= 0.5));
    assert!(!is_r_quasiconvex(&pts, 0.5, 64).unwrap());
    assert!(is_r_quasiconvex(&pts, 3.0, 64).unwrap());
}

#[test]
fn lattice_density_thresholds() {
    let w = Rect::square(3.0).unwrap();
    assert!(is_r_dense(&Sigma::Lattice, 0.75, &w).unwrap());
    assert!(!is_r_dense(&Sigma::Lattice, 0.65, &w).unwrap());
    assert!(is_r_dense(&Sigma::NonZero, 1.01, &w).unwrap());
    assert!(!is_r_dense(&Sigma::NonZero, 0.95, &w).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn loop_index_is_integral(seed in 0u64..u64::MAX, zx in -3.0f64..3.0, zy in -3.0f64..3.0) {
        let mut r = rng(seed);
        let arc = random_simple_arc(&mut r, Vec2::ZERO, 6, 1.0);
        let mut verts = arc.vertices().to_vec();
        verts.push(verts[0]);
        if let Ok(p) = Polyline::new(verts) {
            if let Ok(i) = index_of_arc(&p, Vec2::new(zx, zy)) {
                prop_assert!((i - i.round()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn index_is_additive(seed in 0u64..u64::MAX, zx in -3.0f64..3.0, zy in -3.0f64..3.0) {
        let mut r = rng(seed);
        let a = random_simple_arc(&mut r, Vec2::ZERO, 4, 1.0);
        let b = random_simple_arc(&mut r, a.end(), 4, 1.0);
        let z = Vec2::new(zx, zy);
        if let (Ok(ia), Ok(ib)) = (index_of_arc(&a, z), index_of_arc(&b, z)) {
            let ab = index_of_arc(&a.concat(&b).unwrap(), z).unwrap();
            prop_assert!((ab - ia - ib).abs() <= 1e-12);
        }
    }
}
