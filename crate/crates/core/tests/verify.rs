use approx::assert_relative_eq;
use proptest::prelude::*;
use steinerlab::geom::{translate, BallFit, Chain, CompactSet, Point};
use steinerlab::verify::{case_rng, directed_hausdorff, exact_hausdorff, gen, is_convex_polygon, run_suite, Suite};
use steinerlab::{Ball64, CompactSet64, Error, Point64};

fn p(x: f64, y: f64) -> Point64 {
    Point::new(x, y)
}

#[test]
fn suites_pass_on_small_runs() {
    for (suite, n) in [(Suite::Conservation, 300), (Suite::Inequalities, 300), (Suite::Oracle, 40)] {
        let r = run_suite(suite, n, 42).unwrap();
        assert_eq!(r.cases, n);
        for prop in &r.properties {
            assert_eq!(prop.cases, n, "{}", prop.name);
            assert!(prop.all_passed(), "{suite}/{}: {prop:?}", prop.name);
        }
        assert!(r.all_passed());
    }
}

#[test]
fn suite_property_names() {
    let names = |s| -> Vec<String> { run_suite(s, 1, 0).unwrap().properties.into_iter().map(|p| p.name).collect() };
    assert_eq!(names(Suite::Conservation), ["area", "symmetry", "idempotence"]);
    assert_eq!(
        names(Suite::Inequalities),
        ["difference", "symdiff_contraction", "inclusion", "convexity", "perimeter", "second_moment"]
    );
    assert_eq!(names(Suite::Oracle), ["raster_area", "raster_hausdorff"]);
}

#[test]
fn zero_cases_is_an_error() {
    assert!(matches!(run_suite(Suite::Conservation, 0, 1), Err(Error::InvalidArgument(_))));
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("all".parse::<Suite>().is_err());
}

#[test]
fn runs_are_deterministic() {
    assert_eq!(run_suite(Suite::Inequalities, 20, 9).unwrap(), run_suite(Suite::Inequalities, 20, 9).unwrap());
    let a = gen::compact_set(&mut case_rng(5, Suite::Oracle, 17));
    let b = gen::compact_set(&mut case_rng(5, Suite::Oracle, 17));
    assert_eq!(a, b);
    let c = gen::compact_set(&mut case_rng(5, Suite::Oracle, 18));
    assert_ne!(a, c);
}

#[test]
fn inclusion_pairs_are_nested() {
    for i in 0..50 {
        let (a, b) = gen::inclusion_pair(&mut case_rng(3, Suite::Inequalities, i));
        assert!(steinerlab::clip::contains(&a, &b));
    }
}

#[test]
fn exact_hausdorff_examples() {
    let o = CompactSet64::point(p(0., 0.));
    let q = CompactSet64::point(p(3., 4.));
    assert_relative_eq!(exact_hausdorff(&o, &q, 1e-9), 5.0, epsilon = 1e-9);

    // Farthest point of the square from its corners is the center, an
    // interior point.
    let sq = CompactSet64::rectangle(0., 0., 1., 1.).unwrap();
    let corners = CompactSet64::from_chains([p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)].map(Chain::point).to_vec());
    let d = directed_hausdorff(&sq, &corners, 1e-6);
    assert!(d <= 0.5f64.sqrt() && d >= 0.5f64.sqrt() - 1e-6, "{d}");
    assert_eq!(directed_hausdorff(&corners, &sq, 1e-6), 0.0);

    let seg = CompactSet64::segment(p(0., 0.), p(2., 0.));
    let pt = CompactSet64::point(p(1., 0.5));
    assert_relative_eq!(exact_hausdorff(&seg, &pt, 1e-9), 1.25f64.sqrt(), epsilon = 1e-8);
}

#[test]
fn convexity_test_examples() {
    assert!(is_convex_polygon(&CompactSet64::unit_square(), 1e-7));
    let l = CompactSet64::polygon(vec![p(0., 0.), p(2., 0.), p(2., 1.), p(1., 1.), p(1., 2.), p(0., 2.)]).unwrap();
    assert!(!is_convex_polygon(&l, 1e-7));
    let with_chain = CompactSet64::unit_square().with(CompactSet::segment(p(3., 0.), p(4., 0.)));
    assert!(!is_convex_polygon(&with_chain, 1e-7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_hausdorff_of_translated_convex_copy(n in 3usize..40, tx in -1.0f64..1.0, ty in -1.0f64..1.0) {
        let k = Ball64::centered(1.0).unwrap().to_set(n, BallFit::Inscribed);
        let t = p(tx, ty);
        let d = exact_hausdorff(&k, &translate(&k, t), 1e-6);
        prop_assert!(d <= t.norm() + 1e-12 && d >= t.norm() - 1e-6 - 1e-12);
    }

    #[test]
    fn generated_sets_are_valid(seed in any::<u64>(), i in 0usize..1000) {
        let k = gen::compact_set(&mut case_rng(seed, Suite::Conservation, i));
        let back = CompactSet64::new(k.regions().to_vec(), k.chains().to_vec());
        prop_assert!(back.is_ok());
    }
}
