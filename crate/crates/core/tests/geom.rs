use approx::assert_relative_eq;
use proptest::prelude::*;
use steinerlab::geom::{
    area, convex_hull, diameter, equimeasurable_ball, perimeter, read_set, reflect, rotate,
    second_moment, set_from_json, set_to_json, translate, write_set, BallFit, Chain, CompactSet,
    Direction, Point, Region, Ring,
};
use steinerlab::{Ball64, CompactSet32, CompactSet64, Error, Point64};

fn p(x: f64, y: f64) -> Point64 {
    Point::new(x, y)
}

fn square_with_hole() -> CompactSet64 {
    let outer = Ring::new(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap();
    let hole = Ring::new(vec![p(0.25, 0.25), p(0.75, 0.25), p(0.75, 0.75), p(0.25, 0.75)]).unwrap();
    CompactSet::new(vec![Region::new(outer, vec![hole]).unwrap()], vec![]).unwrap()
}

fn brute_diameter(s: &CompactSet64) -> f64 {
    let v: Vec<Point64> = s.vertices().collect();
    let mut best = 0.0f64;
    for a in &v {
        for b in &v {
            best = best.max(a.dist(*b));
        }
    }
    best
}

#[test]
fn area_examples() {
    assert_eq!(area(&CompactSet64::unit_square()), 1.0);
    assert_eq!(area(&square_with_hole()), 0.75);
    assert_eq!(area(&CompactSet64::segment(p(0., 0.), p(0., 1.))), 0.0);
}

#[test]
fn perimeter_examples() {
    assert_eq!(perimeter(&CompactSet64::unit_square()), 4.0);
    let hex = Ball64::centered(1.0).unwrap().to_set(6, BallFit::Inscribed);
    assert_relative_eq!(perimeter(&hex), 6.0, epsilon = 1e-12);
    let g = Ball64::centered(1.0).unwrap().to_set(64, BallFit::Inscribed);
    let expect = 64.0 * 2.0 * (std::f64::consts::PI / 64.0).sin();
    assert_relative_eq!(perimeter(&g), expect, epsilon = 1e-12);
    assert_eq!(perimeter(&square_with_hole()), 6.0);
}

#[test]
fn diameter_examples() {
    assert_relative_eq!(diameter(&CompactSet64::unit_square()), 2f64.sqrt(), epsilon = 1e-15);
    assert_eq!(diameter(&CompactSet64::segment(p(0., 0.), p(0., 1.))), 1.0);
    let disk = Ball64::centered(1.0).unwrap().to_set(64, BallFit::Inscribed);
    let s = disk.with(CompactSet64::point(p(3.0, 0.0)));
    // the farthest vertex from (3,0) is the vertex at angle π
    assert_relative_eq!(diameter(&s), 4.0, epsilon = 1e-12);
    assert_relative_eq!(diameter(&s), brute_diameter(&s), epsilon = 1e-12);
}

#[test]
fn diameter_of_segment_through_disc() {
    // Centrally symmetric hull: the diametral pair sits on two parallel
    // edges and ties with its neighbour.
    let disc = Ball64::centered(0.1).unwrap().to_set(64, BallFit::Inscribed);
    for t in [0.0, 0.3, 1.1, 2.0] {
        let (c, s) = (0.4 * f64::cos(t), 0.4 * f64::sin(t));
        let k = disc.clone().with(CompactSet64::segment(p(-c, -s), p(c, s)));
        assert_relative_eq!(diameter(&k), 0.8, epsilon = 1e-12);
        let k = rotate(&k, 0.7);
        assert_relative_eq!(diameter(&k), brute_diameter(&k), epsilon = 1e-12);
    }
}

#[test]
fn diameter_with_near_collinear_hull_run() {
    // Long first hull edge followed by a dense, almost straight arc of a
    // large circle: the caliper must not stall at the start.
    let mut pts = vec![p(-0.37, -0.12)];
    let (c, r) = (p(0.2, 1e4), 1e4 + 0.1);
    for i in 0..4000 {
        let t = -std::f64::consts::FRAC_PI_2 + 2e-5 * (i as f64 - 2000.0) / 2000.0;
        pts.push(p(c.x + r * t.cos(), c.y + r * t.sin()));
    }
    pts.push(p(0.0, 0.4));
    let chain = Chain::new(pts).unwrap();
    let s = CompactSet64::from_chains(vec![chain]);
    assert_relative_eq!(diameter(&s), brute_diameter(&s), epsilon = 1e-12);
}

#[test]
fn second_moment_examples() {
    let disk = Ball64::centered(1.0).unwrap();
    let (inner, outer) = (disk.to_set(256, BallFit::Inscribed), disk.to_set(256, BallFit::Circumscribed));
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert!(second_moment(&inner, p(0., 0.)) < half_pi);
    assert!(second_moment(&outer, p(0., 0.)) > half_pi);
    assert_relative_eq!(second_moment(&inner, p(0., 0.)), half_pi, max_relative = 1e-3);
    let moved = translate(&inner, p(0., 2.));
    let expect = second_moment(&inner, p(0., 0.)) + 4.0 * area(&inner);
    assert_relative_eq!(second_moment(&moved, p(0., 0.)), expect, max_relative = 1e-12);
    assert_eq!(second_moment(&CompactSet64::segment(p(0., 0.), p(1., 1.)), p(0., 0.)), 0.0);
    // unit square about its corner: ∫∫ x²+y² = 2/3
    assert_relative_eq!(second_moment(&CompactSet64::unit_square(), p(0., 0.)), 2.0 / 3.0, epsilon = 1e-15);
}

#[test]
fn rigid_motion_examples() {
    let sq = CompactSet64::unit_square();
    let r = rotate(&sq, std::f64::consts::FRAC_PI_2);
    assert_relative_eq!(area(&r), 1.0, epsilon = 1e-12);
    let v = r.regions()[0].outer().vertices();
    assert_relative_eq!(v[1].x, 0.0, epsilon = 1e-15);
    assert_relative_eq!(v[1].y, 1.0, epsilon = 1e-15);

    let ball = Ball64::new(p(0., 2.), 1.0).unwrap().to_set(32, BallFit::Inscribed);
    let m = reflect(&ball, Direction::e2());
    let c: Point64 = m.vertices().fold(p(0., 0.), |a, b| a + b) * (1.0 / 32.0);
    assert_relative_eq!(c.y, -2.0, epsilon = 1e-12);
    assert!(m.regions()[0].outer().is_ccw());

    let back = translate(&translate(&sq, p(1., 1.)), p(-1., -1.));
    for (a, b) in back.vertices().zip(sq.vertices()) {
        assert!(a.dist(b) < 1e-12);
    }
}

#[test]
fn equimeasurable_ball_examples() {
    let b = equimeasurable_ball(&CompactSet64::unit_square()).unwrap();
    assert_relative_eq!(b.radius, 1.0 / std::f64::consts::PI.sqrt(), epsilon = 1e-15);
    let two = Ball64::centered(2.0).unwrap().to_set(256, BallFit::Inscribed);
    assert_relative_eq!(equimeasurable_ball(&two).unwrap().radius, 2.0, max_relative = 1e-3);
    let err = equimeasurable_ball(&CompactSet64::segment(p(0., 0.), p(1., 0.))).unwrap_err();
    assert!(matches!(err, Error::NullSet));
    assert_eq!(err.to_string(), "null set has no equimeasurable ball");
}

#[test]
fn validation_rejects_bad_rings() {
    assert!(Ring::new(vec![p(0., 0.), p(1., 0.)]).is_err());
    assert!(Ring::new(vec![p(0., 0.), p(1., 0.), p(2., 0.)]).is_err());
    let bowtie = vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
    assert!(Ring::new(bowtie).is_err());
    assert!(Ring::new(vec![p(0., 0.), p(f64::NAN, 0.), p(0., 1.)]).is_err());
    let cw = Ring::new(vec![p(0., 0.), p(0., 1.), p(1., 1.), p(1., 0.)]).unwrap();
    assert!(Region::simple(cw).unwrap().outer().is_ccw());
    assert!(CompactSet64::new(vec![], vec![]).is_err());
    let a = Region::simple(Ring::new(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap()).unwrap();
    let b = Region::simple(Ring::new(vec![p(0.5, 0.), p(1.5, 0.), p(1.5, 1.), p(0.5, 1.)]).unwrap()).unwrap();
    assert!(CompactSet64::new(vec![a, b], vec![]).is_err());
}

#[test]
fn direction_normalization() {
    let d = Direction::new(-std::f64::consts::FRAC_PI_2);
    assert_relative_eq!(d.theta(), 1.5 * std::f64::consts::PI);
    assert_eq!(Direction::new(std::f64::consts::TAU).theta(), 0.0);
    let a = Direction::new(0.1f64);
    assert_relative_eq!(a.line_angle(Direction::new(0.1 + std::f64::consts::PI)), 0.0, epsilon = 1e-12);
    assert_relative_eq!(a.line_angle(Direction::new(0.1 + 2.0)), std::f64::consts::PI - 2.0, epsilon = 1e-12);
}

#[test]
fn json_round_trip_and_errors() {
    let s = square_with_hole().with(CompactSet64::from_chains(vec![
        Chain::segment(p(2., 0.), p(3., 0.1)),
        Chain::point(p(0.1 + 0.2, 5.0)),
    ]));
    let text = set_to_json(&s);
    let back: CompactSet64 = set_from_json(&text).unwrap();
    assert_eq!(back, s);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    write_set(&path, &s).unwrap();
    assert_eq!(read_set::<f64>(&path).unwrap(), s);

    let bad = r#"{"regions": [[[0,0],[1,0],[1,"x"]]]}"#;
    match set_from_json::<f64>(bad).unwrap_err() {
        Error::Parse { field, .. } => assert_eq!(field, "regions[0][2]"),
        e => panic!("unexpected {e}"),
    }
    let bad = r#"{"regions": [], "chains": [[]]}"#;
    match set_from_json::<f64>(bad).unwrap_err() {
        Error::Parse { field, .. } => assert_eq!(field, "chains[0]"),
        e => panic!("unexpected {e}"),
    }
    let bad = r#"{"region": []}"#;
    assert!(matches!(set_from_json::<f64>(bad), Err(Error::Parse { .. })));
}

#[test]
fn f32_kernel_agrees_with_f64() {
    let s32: CompactSet32 = CompactSet32::unit_square();
    assert_eq!(area(&s32), 1.0f32);
    let hex = steinerlab::Ball32::centered(1.0).unwrap().to_set(6, BallFit::Inscribed);
    assert!((perimeter(&hex) - 6.0).abs() < 1e-5);
    assert_eq!(square_with_hole().cast::<f32>().cast::<f64>(), square_with_hole());
}

#[test]
fn hull_of_square_plus_interior_point() {
    let pts = vec![p(0., 0.), p(1., 0.), p(0.5, 0.5), p(1., 1.), p(0., 1.), p(0.5, 0.)];
    let h = convex_hull(&pts);
    assert_eq!(h.len(), 4);
    assert_eq!(steinerlab::geom::signed_area(&h), 1.0);
}

fn star(c: (f64, f64), radii: &[f64], phase: f64) -> CompactSet64 {
    let n = radii.len();
    let pts = radii
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let a = phase + std::f64::consts::TAU * k as f64 / n as f64;
            p(c.0 + r * a.cos(), c.1 + r * a.sin())
        })
        .collect();
    CompactSet64::polygon(pts).unwrap()
}

proptest! {
    #[test]
    fn measures_invariant_under_rigid_motions(
        radii in prop::collection::vec(0.5f64..1.0, 3..24),
        phase in 0.0f64..6.3,
        angle in -7.0f64..7.0,
        tx in -3.0f64..3.0,
        ty in -3.0f64..3.0,
        theta in 0.0f64..6.3,
    ) {
        let s = star((0.2, -0.1), &radii, phase);
        let q = p(0.3, 0.4);
        let (a, per, d, i) = (area(&s), perimeter(&s), diameter(&s), second_moment(&s, q));
        let r = rotate(&s, angle);
        let rq = steinerlab::geom::Point::new(q.x * angle.cos() - q.y * angle.sin(), q.x * angle.sin() + q.y * angle.cos());
        prop_assert!((area(&r) - a).abs() <= 1e-9 * a);
        prop_assert!((perimeter(&r) - per).abs() <= 1e-9 * per);
        prop_assert!((diameter(&r) - d).abs() <= 1e-12 * d.max(1.0) * 10.0);
        prop_assert!((second_moment(&r, rq) - i).abs() <= 1e-9 * i);
        let t = translate(&s, p(tx, ty));
        prop_assert!((area(&t) - a).abs() <= 1e-9 * a);
        prop_assert!((second_moment(&t, q + p(tx, ty)) - i).abs() <= 1e-9 * i);
        let u = Direction::new(theta);
        let m = reflect(&s, u);
        let n = u.unit();
        let mq = q - n * (2.0 * q.dot(n));
        prop_assert!((area(&m) - a).abs() <= 1e-9 * a);
        prop_assert!((perimeter(&m) - per).abs() <= 1e-9 * per);
        prop_assert!((diameter(&m) - d).abs() <= 1e-9 * d);
        prop_assert!((second_moment(&m, mq) - i).abs() <= 1e-9 * i);
    }

    #[test]
    fn diameter_matches_all_pairs(radii in prop::collection::vec(0.1f64..1.0, 3..40), phase in 0.0f64..6.3) {
        let s = star((0.0, 0.0), &radii, phase);
        prop_assert!((diameter(&s) - brute_diameter(&s)).abs() <= 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact(radii in prop::collection::vec(0.1f64..1.0, 3..40), phase in 0.0f64..6.3) {
        let s = star((0.1, 0.7), &radii, phase);
        let back: CompactSet64 = set_from_json(&set_to_json(&s)).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #[test]
    fn diameter_matches_brute_force_on_symmetric_squashed_circles(
        angles in prop::collection::vec(0.0..std::f64::consts::TAU, 3..400),
        squash in 1e-6f64..1.0,
    ) {
        let chains = angles
            .iter()
            .flat_map(|t| [1.0, -1.0].map(|sg| Chain::point(p(sg * t.cos(), sg * squash * t.sin()))))
            .collect();
        let s = CompactSet64::from_chains(chains);
        let d = brute_diameter(&s);
        prop_assert!((diameter(&s) - d).abs() <= 1e-12 * d.max(1.0));
    }
}
