use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use steinerlab::sequences::{
    circle_positions, discrepancy, discrepancy_sorted, ledger, line_angle, parse_angle,
    rational_multiple_of_pi, DirectionSpec, Schedule, SquareSum, GOLDEN_ANGLE,
};

/// Supremum over arcs with sample endpoints, by enumeration: closed arcs
/// `[x_a, x_b]` give the excess, open arcs `(x_a, x_b)` the deficit.
fn brute_discrepancy(x: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let mut best: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let len = (x[b] - x[a]).rem_euclid(1.0);
            let inside_closed = |v: f64| (v - x[a]).rem_euclid(1.0) <= len;
            let closed = x.iter().filter(|&&v| inside_closed(v)).count() as f64;
            best = best.max(closed / nf - len);
            let open_len = if len == 0.0 { 1.0 } else { len };
            let inside_open = |v: f64| {
                let d = (v - x[a]).rem_euclid(1.0);
                d > 0.0 && d < open_len
            };
            let open = x.iter().filter(|&&v| inside_open(v)).count() as f64;
            best = best.max(open_len - open / nf);
        }
    }
    best
}

#[test]
fn direction_examples() {
    let k = DirectionSpec::Kronecker { alpha: 1.0 };
    assert_relative_eq!(k.direction(3).theta(), 3.0);
    let p = DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 };
    let b1 = 0.5;
    let b2 = b1 + 0.5 * 2f64.powf(-0.75);
    let b3 = b2 + 0.5 * 3f64.powf(-0.75);
    assert_relative_eq!(p.angle(1), b1, epsilon = 1e-15);
    assert_relative_eq!(p.angle(2), b2, epsilon = 1e-15);
    assert_relative_eq!(p.angle(3), b3, epsilon = 1e-15);
    assert_eq!(p.angles(3), vec![p.angle(1), p.angle(2), p.angle(3)]);
    let f = DirectionSpec::FiniteSet { directions: vec![0.0, FRAC_PI_2], schedule: Schedule::RoundRobin };
    assert_eq!(f.direction(4).theta(), FRAC_PI_2);
    assert_eq!(f.direction(3).theta(), 0.0);
    assert_eq!(f.angle(0), 0.0);
}

#[test]
fn iid_is_random_access_and_seeded() {
    let s = DirectionSpec::Iid { seed: 42 };
    let forward: Vec<f64> = (1..50).map(|m| s.angle(m)).collect();
    let backward: Vec<f64> = (1..50).rev().map(|m| s.angle(m)).collect();
    assert!(forward.iter().eq(backward.iter().rev()));
    assert!(forward.iter().all(|&a| (0.0..TAU).contains(&a)));
    assert_ne!(s.angle(1), DirectionSpec::Iid { seed: 43 }.angle(1));
    let r = DirectionSpec::FiniteSet { directions: vec![0.0, 1.0, 2.0], schedule: Schedule::Random { seed: 9 } };
    let picks: Vec<f64> = (1..300).map(|m| r.angle(m)).collect();
    for d in [0.0, 1.0, 2.0] {
        assert!(picks.iter().filter(|&&a| a == d).count() > 60);
    }
}

#[test]
fn ledger_examples() {
    let p = DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 };
    let l = ledger(&p, 100_000).unwrap();
    let direct: f64 = (1..=100_000).map(|m| (0.5 * (m as f64).powf(-0.75)).cos()).product();
    assert_relative_eq!(l.gamma_m(100_000), direct, max_relative = 1e-12);
    let bound = l.tail_bound.unwrap();
    assert!(bound > 0.0 && bound < 1e-3);
    assert!(l.gamma_target < l.gamma_m(100_000) && l.gamma_m(100_000) - l.gamma_target <= bound);
    // the product over a much longer range stays inside the bound
    let longer: f64 = direct * (100_001..=2_000_000).map(|m| (0.5 * (m as f64).powf(-0.75)).cos()).product::<f64>();
    assert!(l.gamma_m(100_000) - longer <= bound);
    let longer_tail = (-0.5 * 0.25 * 2_000_000.5f64.powf(-0.5) / 0.5).exp();
    assert!((l.gamma_target - longer * longer_tail).abs() < 0.05 * bound);

    let k = ledger(&DirectionSpec::Kronecker { alpha: 1.0 }, 50).unwrap();
    assert_relative_eq!(k.gamma_m(50), 1f64.cos().powi(50), max_relative = 1e-12);
    assert_eq!(k.square_sum, SquareSum::Infinite);
    assert!(k.tail_bound.is_none());

    let e = ledger(&DirectionSpec::Explicit { directions: vec![0.0] }, 10).unwrap();
    assert!(e.alphas.iter().all(|&a| a == 0.0));
    assert_eq!(e.gamma_m(10), 1.0);
    let e = ledger(&DirectionSpec::Explicit { directions: vec![0.3] }, 10).unwrap();
    assert_relative_eq!(e.alpha(1), 0.3);
    assert!(e.alphas[1..].iter().all(|&a| a == 0.0));
    assert_relative_eq!(e.gamma_m(10), 0.3f64.cos());
}

#[test]
fn power_law_sums_against_integral_bounds() {
    let (theta, sigma) = (0.5, 0.75);
    let l = ledger(&DirectionSpec::PowerLaw { theta, sigma }, 200_000).unwrap();
    for &m in &[10usize, 1000, 200_000] {
        // ∫_1^{m+1} θ x^{−σ} dx ≤ β_m ≤ θ + ∫_1^m θ x^{−σ} dx
        let integral = |a: f64, b: f64| theta * (b.powf(1.0 - sigma) - a.powf(1.0 - sigma)) / (1.0 - sigma);
        assert!(l.betas[m - 1] >= integral(1.0, m as f64 + 1.0));
        assert!(l.betas[m - 1] <= theta + integral(1.0, m as f64));
    }
    assert!(l.betas[199_999] > 40.0);
    // Σα² ≤ θ²(1 + 1/(2σ−1))
    assert!(l.alpha_sq_sum <= theta * theta * (1.0 + 1.0 / (2.0 * sigma - 1.0)));
    assert!(l.gamma_partials.windows(2).all(|w| w[1] <= w[0] && w[1] > 0.0));
}

#[test]
fn discrepancy_examples() {
    let c = DirectionSpec::Explicit { directions: vec![0.7] };
    for n in [1, 5, 100] {
        assert_relative_eq!(discrepancy(&c, n).unwrap(), 1.0);
    }
    for n in [1usize, 2, 7, 50] {
        let eq = DirectionSpec::Explicit { directions: (0..n).map(|i| TAU * i as f64 / n as f64).collect() };
        let d = discrepancy(&eq, n).unwrap();
        assert_relative_eq!(d, 1.0 / n as f64, epsilon = 1e-12);
        let x = circle_positions(&eq.angles(n));
        assert_relative_eq!(brute_discrepancy(&x), 1.0 / n as f64, epsilon = 1e-12);
    }
    assert!(discrepancy(&c, 0).is_err());
}

#[test]
fn discrepancy_matches_brute_force_small_n() {
    let specs = [
        DirectionSpec::Kronecker { alpha: GOLDEN_ANGLE },
        DirectionSpec::Kronecker { alpha: 1.0 },
        DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 },
        DirectionSpec::Iid { seed: 3 },
        DirectionSpec::FiniteSet { directions: vec![0.0, 1.0, 4.0], schedule: Schedule::Random { seed: 1 } },
    ];
    for s in &specs {
        for n in 1..=50 {
            let x = circle_positions(&s.angles(n));
            assert!((discrepancy_sorted(&x) - brute_discrepancy(&x)).abs() <= 1e-12, "{} N={n}", s.label());
        }
    }
}

#[test]
fn golden_angle_constant() {
    assert_relative_eq!(GOLDEN_ANGLE, PI * (5f64.sqrt() - 1.0), epsilon = 1e-15);
}

#[test]
fn parsing() {
    assert_eq!(DirectionSpec::parse("kronecker:1").unwrap(), DirectionSpec::Kronecker { alpha: 1.0 });
    assert_eq!(
        DirectionSpec::parse("powerlaw:0.5,0.75").unwrap(),
        DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 }
    );
    assert_eq!(DirectionSpec::parse("iid:7").unwrap(), DirectionSpec::Iid { seed: 7 });
    assert!(DirectionSpec::parse("powerlaw:0.5,0.25").is_err());
    assert!(DirectionSpec::parse("powerlaw:2,0.75").is_err());
    assert!(DirectionSpec::parse("spiral:1").is_err());
    assert_relative_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
    assert_relative_eq!(parse_angle("3*pi/2").unwrap(), 1.5 * PI);
    assert_relative_eq!(parse_angle("0.25").unwrap(), 0.25);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    std::fs::write(&f, "kind = finite\ndirections = 0, pi/4, pi/2  # three\nschedule = indices\nindices = 0,2\n").unwrap();
    let s = DirectionSpec::parse(&format!("finite:{}", f.display())).unwrap();
    assert_eq!(s.angle(2), FRAC_PI_2);
    assert_eq!(s.angle(3), 0.0);
    let e = dir.path().join("e.txt");
    std::fs::write(&e, "0.1\n# comment\n\n0.2\n").unwrap();
    let s = DirectionSpec::parse(&format!("explicit:{}", e.display())).unwrap();
    assert_eq!(s, DirectionSpec::Explicit { directions: vec![0.1, 0.2] });
    std::fs::write(&e, "0.1\nabc\n").unwrap();
    assert!(DirectionSpec::explicit_from_file(&e).unwrap_err().to_string().contains("line 2"));

    let json = serde_json::to_string(&DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 }).unwrap();
    assert_eq!(json, r#"{"kind":"power_law","theta":0.5,"sigma":0.75}"#);
}

#[test]
fn rational_detection() {
    assert_eq!(rational_multiple_of_pi(FRAC_PI_2, 64), Some((1, 2)));
    assert_eq!(rational_multiple_of_pi(1.0, 64), None);
    assert_eq!(rational_multiple_of_pi(GOLDEN_ANGLE, 64), None);
}

proptest! {
    #[test]
    fn discrepancy_in_unit_interval(seed in 0u64..1000, n in 1usize..300) {
        let d = discrepancy(&DirectionSpec::Iid { seed }, n).unwrap();
        prop_assert!(d >= 1.0 / n as f64 - 1e-15 && d <= 1.0);
    }

    #[test]
    fn line_angle_range(a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let v = line_angle(a, b);
        prop_assert!((0.0..=FRAC_PI_2 + 1e-15).contains(&v));
        prop_assert!((line_angle(a, b + PI) - v).abs() < 1e-9);
    }
}
