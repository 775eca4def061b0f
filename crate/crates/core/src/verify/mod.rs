//! Seeded property suites over random compact sets.
//!
//! Case `i` of a suite draws everything from its own ChaCha stream keyed
//! by `(seed, suite, i)`, so any single case can be replayed without
//! running the ones before it.

pub mod gen;
mod oracle;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clip::{contains, difference, symdiff_area};
use crate::error::{Error, Result};
use crate::geom::{area, diameter, perimeter, second_moment, CompactSet};
use crate::raster::{hausdorff, rasterize};
use crate::symmetrize::{is_symmetric, steiner_symmetral};

pub use oracle::{directed_hausdorff, exact_hausdorff};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Conservation,
    Inequalities,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Conservation, Suite::Inequalities, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conservation => "conservation",
            Suite::Inequalities => "inequalities",
            Suite::Oracle => "oracle",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            Suite::Conservation => 1,
            Suite::Inequalities => 2,
            Suite::Oracle => 3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`; valid: conservation, inequalities, oracle")))
    }
}

/// Pass count and worst excess of one property over all cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    /// Largest `lhs − allowed` seen; negative when every case had slack.
    pub worst_excess: f64,
    /// Indices of the first few failing cases.
    pub failures: Vec<usize>,
}

impl PropertyResult {
    fn new(name: &str) -> Self {
        PropertyResult {
            name: name.into(),
            cases: 0,
            passed: 0,
            worst_excess: f64::NEG_INFINITY,
            failures: Vec::new(),
        }
    }

    /// Records `lhs ≤ allowed` for case `i`.
    fn record(&mut self, i: usize, lhs: f64, allowed: f64) {
        self.cases += 1;
        let excess = lhs - allowed;
        self.worst_excess = self.worst_excess.max(excess);
        if excess <= 0.0 {
            self.passed += 1;
        } else if self.failures.len() < 10 {
            self.failures.push(i);
        }
    }

    fn record_bool(&mut self, i: usize, ok: bool) {
        self.record(i, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.cases
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::all_passed)
    }
}

/// Random stream for case `i` of `suite`.
pub fn case_rng(seed: u64, suite: Suite, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.stream_tag() << 40) | i as u64);
    rng
}

/// One region, no holes, no chains, and every turn left up to
/// `angular_tol` (sine of the turning angle).
pub fn is_convex_polygon(set: &CompactSet<f64>, angular_tol: f64) -> bool {
    if set.regions().len() != 1 || !set.chains().is_empty() || !set.regions()[0].holes().is_empty() {
        return false;
    }
    let v = set.regions()[0].outer().vertices();
    let n = v.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e1 = v[(i + 1) % n] - v[i];
        let e2 = v[(i + 2) % n] - v[(i + 1) % n];
        let (l1, l2) = (e1.norm(), e2.norm());
        if l1 == 0.0 || l2 == 0.0 {
            continue;
        }
        if e1.cross(e2) / (l1 * l2) < -angular_tol {
            return false;
        }
        turning += e1.cross(e2).atan2(e1.dot(e2));
    }
    (turning - std::f64::consts::TAU).abs() < 1e-6
}

fn conservation(seed: u64, n: usize) -> Vec<PropertyResult> {
    let mut a = PropertyResult::new("area");
    let mut s = PropertyResult::new("symmetry");
    let mut idem = PropertyResult::new("idempotence");
    for i in 0..n {
        let mut rng = case_rng(seed, Suite::Conservation, i);
        let k = gen::compact_set(&mut rng);
        let u = gen::direction(&mut rng);
        let sk = steiner_symmetral(&k, u);
        let ak = area(&k);
        a.record(i, (area(&sk) - ak).abs(), 1e-9 * ak.max(1.0));
        s.record_bool(i, is_symmetric(&sk, u, 1e-8));
        idem.record(i, symdiff_area(&steiner_symmetral(&sk, u), &sk), 1e-8);
    }
    vec![a, s, idem]
}

fn inequalities(seed: u64, n: usize) -> Vec<PropertyResult> {
    let mut diff = PropertyResult::new("difference");
    let mut contract = PropertyResult::new("symdiff_contraction");
    let mut incl = PropertyResult::new("inclusion");
    let mut convex = PropertyResult::new("convexity");
    let mut per = PropertyResult::new("perimeter");
    let mut moment = PropertyResult::new("second_moment");
    for i in 0..n {
        let mut rng = case_rng(seed, Suite::Inequalities, i);
        let u = gen::direction(&mut rng);

        let (a, b) = (gen::compact_set(&mut rng), gen::compact_set(&mut rng));
        let (sa, sb) = (steiner_symmetral(&a, u), steiner_symmetral(&b, u));
        diff.record(i, area(&difference(&sa, &sb)), area(&difference(&a, &b)) + 1e-8);
        contract.record(i, symdiff_area(&sa, &sb), symdiff_area(&a, &b) + 1e-8);

        let (outer, inner) = gen::inclusion_pair(&mut rng);
        incl.record_bool(i, contains(&steiner_symmetral(&outer, u), &steiner_symmetral(&inner, u)));

        let c = gen::convex(&mut rng);
        let sc = steiner_symmetral(&c, u);
        convex.record_bool(i, is_convex_polygon(&sc, 1e-7));
        per.record(i, perimeter(&sc), perimeter(&c) + 1e-8);

        let p = gen::point(&mut rng, 1.5);
        let w = u.unit();
        let proj = p - w * p.dot(w);
        moment.record(i, second_moment(&sa, proj), second_moment(&a, p) + 1e-8);
    }
    vec![diff, contract, incl, convex, per, moment]
}

fn oracle(seed: u64, n: usize) -> Result<Vec<PropertyResult>> {
    let mut ar = PropertyResult::new("raster_area");
    let mut hd = PropertyResult::new("raster_hausdorff");
    for i in 0..n {
        let mut rng = case_rng(seed, Suite::Oracle, i);
        let k = gen::solid_set(&mut rng);
        let polygons = CompactSet::from_regions(k.regions().to_vec());
        let h = diameter(&polygons) / crate::experiments::DEFAULT_CELLS;
        ar.record(
            i,
            (rasterize(&polygons, h)?.area() - area(&polygons)).abs(),
            3.0 * h * perimeter(&polygons),
        );

        let other = if i % 2 == 0 {
            steiner_symmetral(&k, gen::direction(&mut rng))
        } else {
            gen::compact_set(&mut rng)
        };
        let h = diameter(&k.clone().with(other.clone())) / crate::experiments::DEFAULT_CELLS;
        let raster = hausdorff(&rasterize(&k, h)?, &rasterize(&other, h)?)?;
        let exact = exact_hausdorff(&k, &other, 0.05 * h);
        hd.record(i, (raster - exact).abs(), 2.0 * h);
    }
    Ok(vec![ar, hd])
}

/// Runs one suite on `n` seeded cases.
pub fn run_suite(suite: Suite, n: usize, seed: u64) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("the number of cases must be at least 1".into()));
    }
    let properties = match suite {
        Suite::Conservation => conservation(seed, n),
        Suite::Inequalities => inequalities(seed, n),
        Suite::Oracle => oracle(seed, n)?,
    };
    Ok(SuiteReport {
        suite,
        seed,
        cases: n,
        properties,
    })
}
