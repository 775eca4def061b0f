use proptest::prelude::*;
use steinerlab::clip::symdiff_area;
use steinerlab::dynamics::{
    cauchy_diagnostics, estimate_limit, iterate, iterate_plain, iterate_rotated, monitor, track_anchors,
    write_checkpoints, write_monitor_csv, IterateOptions, Mode, StoragePlan,
};
use steinerlab::geom::{area, point_segment_distance, read_set, rotate, BallFit, CompactSet, Direction, Point};
use steinerlab::sequences::DirectionSpec;
use steinerlab::symmetrize::steiner_symmetral;
use steinerlab::{Ball64, CompactSet64, Error, Point64};

fn p(x: f64, y: f64) -> Point64 {
    Point::new(x, y)
}

fn unit_segment() -> CompactSet64 {
    CompactSet64::segment(p(0.0, -0.5), p(0.0, 0.5))
}

fn power() -> DirectionSpec {
    DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 }
}

/// `∏_{k≤m} cos(0.5 k^{-3/4})`, computed directly.
fn gamma(m: usize) -> f64 {
    (1..=m).map(|k| (0.5 * (k as f64).powf(-0.75)).cos()).product()
}

fn only_chain(set: &CompactSet64) -> (Point64, Point64) {
    assert!(set.regions().is_empty());
    assert_eq!(set.chains().len(), 1);
    let pts = set.chains()[0].points();
    assert_eq!(pts.len(), 2);
    (pts[0], pts[1])
}

fn min_boundary_distance(set: &CompactSet64, c: Point64) -> f64 {
    set.regions()
        .iter()
        .flat_map(|r| r.rings())
        .flat_map(|r| r.edges())
        .map(|(a, b)| point_segment_distance(c, a, b))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn ball_stays_between_inscribed_and_circumscribed_radii() {
    let n = 256;
    let k = Ball64::centered(1.0).unwrap().to_set(n, BallFit::Inscribed);
    let inner = (std::f64::consts::PI / n as f64).cos();
    let t = iterate_plain(&k, &DirectionSpec::Kronecker { alpha: 1.0 }, 12).unwrap();
    for s in &t.steps {
        assert!(s.set.radius_about(p(0.0, 0.0)) <= 1.0 + 1e-9);
        assert!(min_boundary_distance(&s.set, p(0.0, 0.0)) >= inner - 1e-9);
        assert!((area(&s.set) - area(&k)).abs() <= 1e-8 * s.m as f64);
    }
}

#[test]
fn square_symmetrized_about_x_axis_is_then_fixed() {
    let k = CompactSet64::unit_square();
    let spec = DirectionSpec::Explicit {
        directions: vec![std::f64::consts::FRAC_PI_2],
    };
    let t = iterate(&k, &spec, 4, Mode::Plain, &IterateOptions { storage: Some(StoragePlan::all()), ..Default::default() }).unwrap();
    let target = CompactSet64::rectangle(0.0, -0.5, 1.0, 0.5).unwrap();
    for s in &t.steps[1..] {
        assert!(symdiff_area(&s.set, &target) < 1e-12);
    }
}

#[test]
fn plain_segment_spins_with_shrinking_length() {
    let m_max = 200;
    let t = iterate(
        &unit_segment(),
        &power(),
        m_max,
        Mode::Plain,
        &IterateOptions { storage: Some(StoragePlan::all()), ..Default::default() },
    )
    .unwrap();
    let mut beta = 0.0;
    for s in &t.steps[1..] {
        beta += 0.5 * (s.m as f64).powf(-0.75);
        let (a, b) = only_chain(&s.set);
        assert!(((a.dist(b)) - gamma(s.m)).abs() < 1e-9, "m = {}", s.m);
        // Along u_m⊥ and centered.
        let u = p(beta.cos(), beta.sin());
        assert!((b - a).dot(u).abs() < 1e-9);
        assert!((a + b).norm() < 1e-9);
    }
}

#[test]
fn rotated_segment_stays_vertical_with_product_length() {
    let m_max = 300;
    let t = iterate(
        &unit_segment(),
        &power(),
        m_max,
        Mode::Rotated,
        &IterateOptions { storage: Some(StoragePlan::all()), ..Default::default() },
    )
    .unwrap();
    for s in &t.steps {
        let (a, b) = only_chain(&s.set);
        assert!(a.x.abs() < 1e-9 && b.x.abs() < 1e-9);
        assert!((a.y + b.y).abs() < 1e-9);
        assert!(((b.y - a.y).abs() - gamma(s.m)).abs() < 1e-9);
    }
    let est = estimate_limit(&t, 270, 1.0 / 512.0).unwrap();
    let (a, b) = only_chain(&est.set);
    assert!((a.dist(b) - gamma(m_max)).abs() < 1e-9);
    assert!(a.dist(b) - t.ledger.gamma_target <= t.ledger.tail_bound.unwrap());
    assert!(est.error < 0.01);
}

#[test]
fn rotated_mode_rejects_degenerate_increments() {
    let k = CompactSet64::unit_square();
    for dirs in [vec![0.0], vec![std::f64::consts::FRAC_PI_2]] {
        let spec = DirectionSpec::Explicit { directions: dirs };
        assert!(matches!(iterate_rotated(&k, &spec, 3), Err(Error::Hypothesis(_))));
    }
}

#[test]
fn injected_area_fault_trips_the_invariant() {
    let k = CompactSet64::unit_square();
    let opt = IterateOptions {
        inject_area_fault: Some(3),
        ..Default::default()
    };
    let r = iterate(&k, &DirectionSpec::Kronecker { alpha: 1.0 }, 5, Mode::Plain, &opt);
    assert!(matches!(r, Err(Error::Invariant(_))));
}

#[test]
fn anchors_follow_the_scalar_recursion() {
    let q = p(0.0, 1.0);
    let flat = DirectionSpec::Explicit { directions: vec![0.0] };
    let tr = track_anchors(&flat, 10, &[q, p(0.0, 0.0)]).unwrap();
    assert!(tr[0].points.iter().all(|&x| x == q));
    assert!(tr[1].points.iter().all(|&x| x == p(0.0, 0.0)));

    let m_max = 5000;
    let tr = track_anchors(&power(), m_max, &[q]).unwrap();
    let led = steinerlab::sequences::ledger(&power(), m_max).unwrap();
    let bound = led.tail_bound.unwrap() / led.gamma_target;
    assert!((tr[0].points[m_max] - q).norm() <= bound);
    for w in tr[0].points.windows(2) {
        assert!(w[1].y < w[0].y && w[1].y > 0.0);
    }
    assert!(track_anchors(&power(), 5, &[p(0.1, 1.0)]).is_err());
}

#[test]
fn monitor_rows_for_rotated_segment() {
    let opt = IterateOptions {
        storage: Some(StoragePlan { keep_every: 10, dense_tail: 0, extra: vec![] }),
        anchors: vec![p(0.0, 0.0)],
        ..Default::default()
    };
    let t = iterate(&unit_segment(), &power(), 100, Mode::Rotated, &opt).unwrap();
    let h = 1.0 / 512.0;
    let table = monitor(&t, &[0.2], &[0.1, 5.0], &[p(0.0, 0.0)], h).unwrap();
    assert!(table.is_nonincreasing(), "{:?}", table.violations());
    let small = table.row(0, 0, 0);
    assert!(small[0] > 0.0);
    assert!(table.row(0, 1, 0).iter().all(|&v| v == 0.0));
    // Direct evaluation: the capsule around a vertical segment of length L
    // minus the disc of radius 0.1 has area 2δL + πδ² − π 0.1².
    for (mi, &m) in table.ms.iter().enumerate() {
        let l = gamma(m);
        let exact = 0.4 * l + std::f64::consts::PI * (0.04 - 0.01);
        assert!((small[mi] - exact).abs() <= table.tolerance(mi, 0), "m = {m}");
    }
}

#[test]
fn fixed_point_diagnostics_vanish() {
    let k = CompactSet64::rectangle(-0.5, -0.5, 0.5, 0.5).unwrap();
    let spec = DirectionSpec::FiniteSet {
        directions: vec![0.0, std::f64::consts::FRAC_PI_2],
        schedule: steinerlab::sequences::Schedule::RoundRobin,
    };
    let opt = IterateOptions {
        storage: Some(StoragePlan::all()),
        ..Default::default()
    };
    let t = iterate(&k, &spec, 6, Mode::Plain, &opt).unwrap();
    let h = 1.0 / 256.0;
    let rows = cauchy_diagnostics(&t, &[1, 2], h).unwrap();
    assert_eq!(rows.len(), 6 + 5);
    for r in &rows {
        assert!(r.hausdorff <= 2.0 * h && r.symdiff < 1e-12);
    }
    let est = estimate_limit(&t, 0, h).unwrap();
    assert!(est.tail_max <= 2.0 * h);
    let table = monitor(&t, &[0.1], &[0.2], &[p(0.0, 0.0)], h).unwrap();
    let row = table.row(0, 0, 0);
    assert!(row.iter().all(|&v| v == row[0]));
}

#[test]
fn checkpoints_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = iterate_plain(&CompactSet64::unit_square(), &DirectionSpec::Kronecker { alpha: 1.0 }, 20).unwrap();
    let man = write_checkpoints(&t, dir.path()).unwrap();
    assert_eq!(man.steps, t.stored().collect::<Vec<_>>());
    for s in &t.steps {
        let back: CompactSet64 = read_set(dir.path().join(format!("step_{}.json", s.m))).unwrap();
        assert_eq!(back, s.set);
    }
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    assert!(text.contains("\"M\": 20"));

    let table = monitor(&t, &[0.1], &[0.3], &[p(0.0, 0.0)], 0.01).unwrap();
    let csv_path = dir.path().join("monitor.csv");
    write_monitor_csv(&table, &csv_path).unwrap();
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "m,delta,r,anchor,value");
    assert_eq!(csv.lines().count(), 1 + t.steps.len());
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
    CompactSet::polygon(pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetrization_commutes_with_rotation(
        r in prop::collection::vec(0.3f64..1.0, 3..25),
        ph in 0.0f64..6.3,
        c in (-0.5f64..0.5, -0.5f64..0.5),
        u in 0.0f64..6.3,
        rot in -3.2f64..3.2,
    ) {
        let k = star(c, &r, ph);
        let lhs = rotate(&steiner_symmetral(&k, Direction::new(u)), rot);
        let rhs = steiner_symmetral(&rotate(&k, rot), Direction::new(u + rot));
        prop_assert!(symdiff_area(&lhs, &rhs) <= 1e-8);
    }

    #[test]
    fn anchor_step_is_a_contraction(alpha in 1e-6f64..1.5707, x in -10.0f64..10.0) {
        let spec = DirectionSpec::Explicit { directions: vec![alpha, 0.0] };
        let tr = track_anchors(&spec, 1, &[p(0.0, x)]).unwrap();
        let (x0, x1) = (tr[0].points[0].y, tr[0].points[1].y);
        // x1 − x0 cancels, so allow a few ulps of x0 on top.
        let ulps = 4.0 * f64::EPSILON * x0.abs();
        prop_assert!((x1 - x0).abs() <= (1.0 - alpha.cos()) * x0.abs() * (1.0 + 1e-12) + ulps);
        prop_assert!(x0.abs() >= x1.abs());
        prop_assert!(x1.abs() >= x0.abs() * alpha.cos() * (1.0 - 1e-12));
    }

    #[test]
    fn rotated_sets_are_symmetric_and_area_preserving(
        r in prop::collection::vec(0.3f64..1.0, 3..10),
        ph in 0.0f64..6.3,
        theta in 0.05f64..1.0,
        sigma in 0.55f64..0.95,
    ) {
        let k = star((0.1, -0.2), &r, ph);
        let spec = DirectionSpec::PowerLaw { theta, sigma };
        let opt = IterateOptions { storage: Some(StoragePlan::all()), ..Default::default() };
        let t = iterate(&k, &spec, 8, Mode::Rotated, &opt).unwrap();
        for s in &t.steps[1..] {
            prop_assert!(steinerlab::symmetrize::is_symmetric(&s.set, Direction::e1(), 1e-7));
            prop_assert!((area(&s.set) - area(&k)).abs() <= 1e-8 * s.m as f64);
        }
    }
}
