use approx::assert_relative_eq;
use proptest::prelude::*;
use steinerlab::clip::{boolean_area, contains, difference, intersect, symdiff_area, union, BoolOp};
use steinerlab::geom::{area, set_from_json, set_to_json, translate, BallFit, CompactSet, Point};
use steinerlab::{Ball64, CompactSet64, Point64};

fn p(x: f64, y: f64) -> Point64 {
    Point::new(x, y)
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> CompactSet64 {
    CompactSet::rectangle(x0, y0, x1, y1).unwrap()
}

fn disk(r: f64, fit: BallFit) -> CompactSet64 {
    Ball64::centered(r).unwrap().to_set(256, fit)
}

#[test]
fn intersect_examples() {
    let a = CompactSet64::unit_square();
    let b = rect(0.5, 0., 1.5, 1.);
    let i = intersect(&a, &b);
    assert_relative_eq!(area(&i), 0.5, epsilon = 1e-12);
    assert_eq!(i.regions().len(), 1);
    assert!(intersect(&a, &rect(2., 2., 3., 3.)).is_empty());
    let d = disk(1.0, BallFit::Inscribed);
    assert_relative_eq!(area(&intersect(&d, &d)), area(&d), epsilon = 1e-9);
}

#[test]
fn difference_and_union_examples() {
    let a = CompactSet64::unit_square();
    let b = rect(0.5, 0., 1.5, 1.);
    assert_relative_eq!(area(&difference(&a, &b)), 0.5, epsilon = 1e-12);
    assert_eq!(area(&difference(&a, &a)), 0.0);
    let c = rect(0.5, 0.5, 1.5, 1.5);
    let u = union(&a, &c);
    assert_relative_eq!(area(&u), 1.75, epsilon = 1e-12);
    assert_eq!(u.regions().len(), 1);
    assert_eq!(u.regions()[0].outer().len(), 8);
}

#[test]
fn difference_creates_hole() {
    let a = rect(0., 0., 3., 3.);
    let b = rect(1., 1., 2., 2.);
    let d = difference(&a, &b);
    assert_eq!(d.regions().len(), 1);
    assert_eq!(d.regions()[0].holes().len(), 1);
    assert_relative_eq!(area(&d), 8.0, epsilon = 1e-12);
    // result is a valid input
    let back: CompactSet64 = set_from_json(&set_to_json(&d)).unwrap();
    assert_relative_eq!(area(&back), 8.0, epsilon = 1e-12);
}

#[test]
fn symdiff_examples() {
    let (b2, b1) = (disk(2.0, BallFit::Inscribed), disk(1.0, BallFit::Inscribed));
    let sd = symdiff_area(&b2, &b1);
    assert_relative_eq!(sd, area(&b2) - area(&b1), epsilon = 1e-9);
    let pi = std::f64::consts::PI;
    let lo = area(&b2) - area(&disk(1.0, BallFit::Circumscribed));
    let hi = area(&disk(2.0, BallFit::Circumscribed)) - area(&b1);
    assert!(lo <= 3.0 * pi && 3.0 * pi <= hi && lo <= sd && sd <= hi);
    assert_eq!(symdiff_area(&b1, &b1), 0.0);
    let a = CompactSet64::unit_square();
    assert_relative_eq!(symdiff_area(&a, &translate(&a, p(0.1, 0.))), 0.2, epsilon = 1e-12);
}

#[test]
fn contains_examples() {
    let (b1, b2) = (disk(1.0, BallFit::Inscribed), disk(2.0, BallFit::Inscribed));
    assert!(contains(&b2, &b1));
    assert!(!contains(&b1, &b2));
    assert!(contains(&b1, &b1));
    let seg = CompactSet64::segment(p(-0.5, 0.), p(0.5, 0.));
    assert!(contains(&b1, &seg));
    assert!(!contains(&b1, &CompactSet64::segment(p(-0.5, 0.), p(1.5, 0.))));
    // chord across the notch of a nonconvex region
    let u = CompactSet64::polygon(vec![p(0., 0.), p(3., 0.), p(3., 2.), p(2., 2.), p(2., 1.), p(1., 1.), p(1., 2.), p(0., 2.)]).unwrap();
    assert!(!contains(&u, &CompactSet64::segment(p(0.5, 1.5), p(2.5, 1.5))));
    assert!(contains(&u, &CompactSet64::segment(p(0.5, 0.5), p(2.5, 0.5))));
    assert!(contains(&u, &CompactSet64::point(p(1.5, 1.0))));
}

#[test]
fn shared_edges_and_vertices() {
    let a = rect(0., 0., 1., 1.);
    let b = rect(1., 0., 2., 1.);
    let u = union(&a, &b);
    assert_eq!(u.regions().len(), 1);
    assert_eq!(u.regions()[0].outer().len(), 4);
    assert_relative_eq!(area(&u), 2.0, epsilon = 1e-15);
    assert!(intersect(&a, &b).is_empty());
    // corner-touching squares stay separate
    let c = rect(1., 1., 2., 2.);
    let u = union(&a, &c);
    assert_relative_eq!(area(&u), 2.0, epsilon = 1e-15);
    // chains are dropped
    let with_chain = a.clone().with(CompactSet64::segment(p(5., 5.), p(6., 6.)));
    assert!(intersect(&with_chain, &with_chain).chains().is_empty());
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

fn arb_star() -> impl Strategy<Value = CompactSet64> {
    (
        prop::collection::vec(0.3f64..1.0, 3..30),
        0.0f64..6.3,
        -0.5f64..0.5,
        -0.5f64..0.5,
    )
        .prop_map(|(r, ph, x, y)| star((x, y), &r, ph))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn inclusion_exclusion(a in arb_star(), b in arb_star()) {
        let u = boolean_area(&a, &b, BoolOp::Union);
        let i = boolean_area(&a, &b, BoolOp::Intersection);
        prop_assert!((u + i - area(&a) - area(&b)).abs() <= 1e-9);
        let ub = area(&union(&a, &b));
        let ib = area(&intersect(&a, &b));
        prop_assert!((ub - u).abs() <= 1e-9);
        prop_assert!((ib - i).abs() <= 1e-9);
        let d = area(&difference(&a, &b));
        prop_assert!((d - (area(&a) - ib)).abs() <= 1e-9);
    }

    #[test]
    fn commutativity(a in arb_star(), b in arb_star()) {
        prop_assert!((area(&intersect(&a, &b)) - area(&intersect(&b, &a))).abs() <= 1e-9);
        prop_assert!((area(&union(&a, &b)) - area(&union(&b, &a))).abs() <= 1e-9);
        prop_assert!((symdiff_area(&a, &b) - symdiff_area(&b, &a)).abs() <= 1e-9);
    }

    #[test]
    fn results_round_trip(a in arb_star(), b in arb_star()) {
        for r in [intersect(&a, &b), union(&a, &b), difference(&a, &b)] {
            if r.is_empty() { continue; }
            let back: CompactSet64 = set_from_json(&set_to_json(&r)).unwrap();
            prop_assert!((area(&back) - area(&r)).abs() <= 1e-12);
        }
    }
}
