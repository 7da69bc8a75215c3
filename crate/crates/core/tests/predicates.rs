mod common;

use common::{incircle_exact, orient_exact, within_exact};
use delaunay_dilation::geom::{incircle, orient2d, Point2, PredicateSign};
use delaunay_dilation::triangulation::{perturb, PointSet};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3..1e3f64,
        (-8i32..8).prop_map(|k| k as f64 * 0.125),
        (-1e-3..1e-3f64).prop_map(|x| 0.5 + x),
    ]
}

fn point() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::xy(x, y))
}

/// A point a few ulps off the line through `a` and `b`.
fn nearly_collinear() -> impl Strategy<Value = (Point2, Point2, Point2)> {
    (point(), point(), 0.0..1.0f64, -4i64..4).prop_map(|(a, b, t, ulps)| {
        let c = a + (b - a) * t;
        let mut y = c.y;
        for _ in 0..ulps.abs() {
            y = if ulps > 0 { y.next_up() } else { y.next_down() };
        }
        (a, b, Point2::xy(c.x, y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn orientation_matches_rationals(a in point(), b in point(), c in point()) {
        prop_assert_eq!(orient2d(a, b, c), orient_exact(a, b, c));
    }

    #[test]
    fn orientation_near_lines((a, b, c) in nearly_collinear()) {
        prop_assert_eq!(orient2d(a, b, c), orient_exact(a, b, c));
    }

    #[test]
    fn incircle_matches_rationals(a in point(), b in point(), c in point(), d in point()) {
        match orient_exact(a, b, c) {
            PredicateSign::Zero => prop_assert!(incircle(a, b, c, d).is_err()),
            PredicateSign::Positive => prop_assert_eq!(incircle(a, b, c, d).unwrap(), incircle_exact(a, b, c, d)),
            PredicateSign::Negative => prop_assert_eq!(incircle(a, b, c, d).unwrap(), incircle_exact(a, c, b, d)),
        }
    }

    #[test]
    fn incircle_near_circles(angles in prop::array::uniform4(0.0..std::f64::consts::TAU), r in 0.1..100.0f64) {
        // points rounded onto a circle: nearly cocircular, sign decided exactly
        let [a, b, c, d] = angles.map(|t| Point2::polar(t) * r);
        if orient_exact(a, b, c) == PredicateSign::Positive {
            prop_assert_eq!(incircle(a, b, c, d).unwrap(), incircle_exact(a, b, c, d));
        }
    }

    #[test]
    fn perturb_never_exceeds_delta(seed in any::<u64>(), delta in prop_oneof![1e-12..1e-6f64, 1e-3..10.0f64], scale in prop_oneof![Just(1.0), Just(1e6), Just(1e-6)]) {
        let ps = PointSet::new((0..20).map(|i| Point2::xy(scale * i as f64 / 3.0, scale * (i * i) as f64 / 7.0)).collect()).unwrap();
        let moved = perturb(&ps, delta, seed).unwrap();
        for (p, q) in moved.points().iter().zip(ps.points()) {
            prop_assert!(within_exact(*p, *q, delta), "{:?} -> {:?} beyond {}", q, p, delta);
        }
    }
}

#[test]
fn integer_cocircular_points() {
    // (±5, 0), (0, ±5), (±3, ±4) all lie on the circle of radius 5
    let on = [(5.0, 0.0), (3.0, 4.0), (0.0, 5.0), (-3.0, 4.0), (-4.0, -3.0), (4.0, -3.0)];
    let p: Vec<Point2> = on.iter().map(|&(x, y)| Point2::xy(x, y)).collect();
    for d in &p[3..] {
        assert_eq!(incircle(p[0], p[1], p[2], *d).unwrap(), PredicateSign::Zero);
        assert_eq!(incircle_exact(p[0], p[1], p[2], *d), PredicateSign::Zero);
    }
}
