//! Direction sequences `u_1, u_2, …` on the unit circle, their angle
//! bookkeeping and the arc discrepancy of their initial segments.
//!
//! By convention `u_0 = e1`, so `α_1` is the angle between `e1` and `u_1`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Direction;

/// `π(√5 − 1)`, the badly approximable default Kronecker angle.
pub const GOLDEN_ANGLE: f64 = 3.883_222_077_450_933;

/// Order in which a finite direction set is visited.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    RoundRobin,
    /// Indices into the direction list, repeated cyclically.
    Indices { indices: Vec<usize> },
    /// Uniform choice per step, random-access in `m`.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DirectionSpec {
    /// `u_m = (cos mα, sin mα)`.
    Kronecker { alpha: f64 },
    /// `u_m = (cos β_m, sin β_m)` with `β_m = Σ_{k≤m} θ k^{−σ}`.
    PowerLaw { theta: f64, sigma: f64 },
    FiniteSet { directions: Vec<f64>, schedule: Schedule },
    /// Independent uniform directions from a counter-based generator.
    Iid { seed: u64 },
    /// Fixed list of angles, repeated cyclically.
    Explicit { directions: Vec<f64> },
}

/// Whether `Σ α_m²` is finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareSum {
    Finite,
    Infinite,
}

/// Angle of the line through `a` relative to the line through `b`, folded
/// into `[0, π/2]`.
pub fn line_angle(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(PI);
    d.min(PI - d)
}

/// Random-access uniform draw in `[0, 1)` for counter `m`.
fn uniform(seed: u64, m: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * m as u128);
    rng.gen::<f64>()
}

fn index_draw(seed: u64, m: usize, n: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * m as u128);
    rng.gen_range(0..n)
}

fn power_sum(theta: f64, sigma: f64, m: usize) -> f64 {
    // Neumaier-compensated summation
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for k in 1..=m {
        let x = theta * (k as f64).powf(-sigma);
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

impl DirectionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        match self {
            DirectionSpec::Kronecker { alpha } if !alpha.is_finite() => bad("kronecker angle must be finite".into()),
            DirectionSpec::PowerLaw { theta, sigma } => {
                if !(*theta > 0.0 && *theta < FRAC_PI_2) {
                    return bad(format!("power-law theta must lie in (0, π/2), got {theta}"));
                }
                if !(*sigma > 0.5 && *sigma < 1.0) {
                    return bad(format!("power-law sigma must lie in (1/2, 1), got {sigma}"));
                }
                Ok(())
            }
            DirectionSpec::FiniteSet { directions, schedule } => {
                if directions.is_empty() {
                    return bad("finite direction set is empty".into());
                }
                if directions.iter().any(|a| !a.is_finite()) {
                    return bad("direction angles must be finite".into());
                }
                if let Schedule::Indices { indices } = schedule {
                    if indices.is_empty() {
                        return bad("index schedule is empty".into());
                    }
                    if let Some(i) = indices.iter().find(|&&i| i >= directions.len()) {
                        return bad(format!("schedule index {i} out of range for {} directions", directions.len()));
                    }
                }
                Ok(())
            }
            DirectionSpec::Explicit { directions } => {
                if directions.is_empty() {
                    return bad("explicit direction list is empty".into());
                }
                if directions.iter().any(|a| !a.is_finite()) {
                    return bad("direction angles must be finite".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Unreduced angle of `u_m`; `m = 0` gives `0` (the direction `e1`).
    pub fn angle(&self, m: usize) -> f64 {
        if m == 0 {
            return 0.0;
        }
        match self {
            DirectionSpec::Kronecker { alpha } => (m as f64) * alpha,
            DirectionSpec::PowerLaw { theta, sigma } => power_sum(*theta, *sigma, m),
            DirectionSpec::FiniteSet { directions, schedule } => {
                let n = directions.len();
                let i = match schedule {
                    Schedule::RoundRobin => (m - 1) % n,
                    Schedule::Indices { indices } => indices[(m - 1) % indices.len()],
                    Schedule::Random { seed } => index_draw(*seed, m, n),
                };
                directions[i]
            }
            DirectionSpec::Iid { seed } => TAU * uniform(*seed, m),
            DirectionSpec::Explicit { directions } => directions[(m - 1) % directions.len()],
        }
    }

    pub fn direction(&self, m: usize) -> Direction<f64> {
        Direction::new(self.angle(m))
    }

    /// Angles of `u_1, …, u_n` computed incrementally.
    pub fn angles(&self, n: usize) -> Vec<f64> {
        match self {
            DirectionSpec::PowerLaw { theta, sigma } => {
                let mut out = Vec::with_capacity(n);
                let (mut s, mut c) = (0.0f64, 0.0f64);
                for k in 1..=n {
                    let x = theta * (k as f64).powf(-sigma);
                    let t = s + x;
                    c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
                    s = t;
                    out.push(s + c);
                }
                out
            }
            _ => (1..=n).map(|m| self.angle(m)).collect(),
        }
    }

    /// Increment `α_m` in `[0, π/2]`; exact for the power law.
    pub fn alpha(&self, m: usize) -> f64 {
        match self {
            DirectionSpec::PowerLaw { theta, sigma } => theta * (m as f64).powf(-sigma),
            _ => line_angle(self.angle(m - 1), self.angle(m)),
        }
    }

    pub fn square_sum(&self) -> SquareSum {
        let cyc = |dirs: &[f64]| {
            let n = dirs.len();
            let flat = (0..n).all(|i| line_angle(dirs[i], dirs[(i + 1) % n]) == 0.0);
            if flat {
                SquareSum::Finite
            } else {
                SquareSum::Infinite
            }
        };
        match self {
            DirectionSpec::PowerLaw { .. } => SquareSum::Finite,
            DirectionSpec::Kronecker { alpha } => {
                if line_angle(0.0, *alpha) == 0.0 {
                    SquareSum::Finite
                } else {
                    SquareSum::Infinite
                }
            }
            DirectionSpec::FiniteSet { directions, .. } => cyc(directions),
            DirectionSpec::Iid { .. } => SquareSum::Infinite,
            DirectionSpec::Explicit { directions } => cyc(directions),
        }
    }

    /// Short human-readable label, e.g. `powerlaw:0.5,0.75`.
    pub fn label(&self) -> String {
        match self {
            DirectionSpec::Kronecker { alpha } => format!("kronecker:{alpha}"),
            DirectionSpec::PowerLaw { theta, sigma } => format!("powerlaw:{theta},{sigma}"),
            DirectionSpec::FiniteSet { directions, .. } => format!("finite:{} directions", directions.len()),
            DirectionSpec::Iid { seed } => format!("iid:{seed}"),
            DirectionSpec::Explicit { directions } => format!("explicit:{} directions", directions.len()),
        }
    }

    /// Parses the inline forms `kronecker:ALPHA`, `powerlaw:THETA,SIGMA`
    /// and `iid:SEED`; `finite:PATH` and `explicit:PATH` load files.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected KIND:ARGS, got `{text}`")))?;
        let spec = match kind.trim().to_ascii_lowercase().as_str() {
            "kronecker" => DirectionSpec::Kronecker { alpha: parse_angle(arg)? },
            "powerlaw" | "power_law" => {
                let (t, s) = arg
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidSpec("powerlaw needs THETA,SIGMA".into()))?;
                DirectionSpec::PowerLaw {
                    theta: parse_angle(t)?,
                    sigma: parse_number(s)?,
                }
            }
            "iid" => DirectionSpec::Iid {
                seed: arg
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("iid seed must be an integer, got `{arg}`")))?,
            },
            "finite" => DirectionSpec::from_config_file(arg.trim())?,
            "explicit" => DirectionSpec::explicit_from_file(arg.trim())?,
            other => return Err(Error::InvalidSpec(format!("unknown direction family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Key-value block, one `key = value` per line, `#` comments:
    ///
    /// ```text
    /// kind = finite
    /// directions = 0, pi/4, pi/2
    /// schedule = round_robin      # or indices / random
    /// indices = 0, 2, 1           # for schedule = indices
    /// seed = 7                    # for schedule = random
    /// ```
    ///
    /// Other kinds use `alpha` (kronecker), `theta`/`sigma` (powerlaw),
    /// `seed` (iid) or `directions` (explicit).
    pub fn from_config_block(text: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {}", n + 1), "expected `key = value`"))?;
            kv.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).ok_or_else(|| Error::parse(k, "missing key"));
        let list = |k: &str| -> Result<Vec<f64>> {
            get(k)?
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_angle(s).map_err(|e| Error::parse(k, e.to_string())))
                .collect()
        };
        let spec = match get("kind")?.to_ascii_lowercase().as_str() {
            "kronecker" => DirectionSpec::Kronecker { alpha: parse_angle(get("alpha")?)? },
            "powerlaw" | "power_law" => DirectionSpec::PowerLaw {
                theta: parse_angle(get("theta")?)?,
                sigma: parse_number(get("sigma")?)?,
            },
            "iid" => DirectionSpec::Iid {
                seed: get("seed")?.parse().map_err(|_| Error::parse("seed", "expected an integer"))?,
            },
            "explicit" => DirectionSpec::Explicit { directions: list("directions")? },
            "finite" | "finite_set" => {
                let directions = list("directions")?;
                let schedule = match kv.get("schedule").map(|s| s.to_ascii_lowercase()).as_deref() {
                    None | Some("round_robin") => Schedule::RoundRobin,
                    Some("indices") => Schedule::Indices {
                        indices: get("indices")?
                            .split(',')
                            .map(|s| s.trim().parse().map_err(|_| Error::parse("indices", "expected integers")))
                            .collect::<Result<_>>()?,
                    },
                    Some("random") => Schedule::Random {
                        seed: get("seed")?.parse().map_err(|_| Error::parse("seed", "expected an integer"))?,
                    },
                    Some(other) => return Err(Error::parse("schedule", format!("unknown schedule `{other}`"))),
                };
                DirectionSpec::FiniteSet { directions, schedule }
            }
            other => return Err(Error::parse("kind", format!("unknown direction family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        DirectionSpec::from_config_block(&std::fs::read_to_string(path)?)
    }

    /// One angle in radians per line; blank lines and `#` comments skipped.
    pub fn explicit_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut directions = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            directions.push(parse_angle(line).map_err(|e| Error::parse(format!("line {}", n + 1), e.to_string()))?);
        }
        let spec = DirectionSpec::Explicit { directions };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidSpec(format!("expected a number, got `{}`", s.trim())))
}

/// Angle in radians: a number, or `pi`, `pi/N`, `K*pi`, `K*pi/N`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), parse_number(b)?),
        None => (t.clone(), 1.0),
    };
    let k = match num.as_str() {
        "pi" => 1.0,
        "-pi" => -1.0,
        _ => match num.strip_suffix("*pi").or_else(|| num.strip_suffix("pi")) {
            Some(k) => parse_number(k)?,
            None => return Err(Error::InvalidSpec(format!("cannot parse angle `{}`", s.trim()))),
        },
    };
    Ok(k * PI / den)
}

/// Per-step angle bookkeeping for `m = 1..=M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleLedger {
    pub alphas: Vec<f64>,
    /// `β_m = Σ_{k≤m} α_k`.
    pub betas: Vec<f64>,
    /// `γ_m = ∏_{k≤m} cos α_k`.
    pub gamma_partials: Vec<f64>,
    pub square_sum: SquareSum,
    /// Partial sum `Σ_{k≤M} α_k²`.
    pub alpha_sq_sum: f64,
    /// Upper bound on `γ_M − γ` when `Σ α²` is known to converge.
    pub tail_bound: Option<f64>,
    /// Estimate of `γ = lim γ_m` (tail-corrected for the power law).
    pub gamma_target: f64,
}

impl AngleLedger {
    pub fn gamma_m(&self, m: usize) -> f64 {
        if m == 0 {
            1.0
        } else {
            self.gamma_partials[m - 1]
        }
    }

    pub fn alpha(&self, m: usize) -> f64 {
        self.alphas[m - 1]
    }
}

/// `Σ_{k>M} θ² k^{−2σ} ≤ θ² M^{1−2σ}/(2σ−1)`.
pub fn power_tail_sq(theta: f64, sigma: f64, m: usize) -> f64 {
    theta * theta * (m as f64).powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
}

pub fn ledger(spec: &DirectionSpec, big_m: usize) -> Result<AngleLedger> {
    spec.validate()?;
    if big_m == 0 {
        return Err(Error::InvalidArgument("ledger needs M >= 1".into()));
    }
    let angles = spec.angles(big_m);
    let mut alphas = Vec::with_capacity(big_m);
    let mut prev = 0.0;
    for m in 1..=big_m {
        let a = match spec {
            DirectionSpec::PowerLaw { .. } => spec.alpha(m),
            _ => line_angle(prev, angles[m - 1]),
        };
        prev = angles[m - 1];
        alphas.push(a);
    }
    let mut betas = Vec::with_capacity(big_m);
    let mut gammas = Vec::with_capacity(big_m);
    let (mut b, mut g, mut sq) = (0.0, 1.0, 0.0);
    for &a in &alphas {
        b += a;
        g *= a.cos();
        sq += a * a;
        betas.push(b);
        gammas.push(g);
    }
    let square_sum = spec.square_sum();
    let gamma_m = g;
    let (tail_bound, gamma_target) = match (spec, square_sum) {
        (DirectionSpec::PowerLaw { theta, sigma }, _) => {
            let a_m = alphas[big_m - 1];
            let s = power_tail_sq(*theta, *sigma, big_m) / (2.0 * a_m.cos().powi(2));
            let est = *theta * *theta * (big_m as f64 + 0.5).powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
            (Some(gamma_m * s.exp_m1()), gamma_m * (-0.5 * est).exp())
        }
        (_, SquareSum::Finite) => (Some(0.0), gamma_m),
        _ => (None, gamma_m),
    };
    Ok(AngleLedger {
        alphas,
        betas,
        gamma_partials: gammas,
        square_sum,
        alpha_sq_sum: sq,
        tail_bound,
        gamma_target,
    })
}

/// Arc discrepancy of sorted points `x ∈ [0, 1)`:
/// `1/N + max(x_i − i/N) − min(x_i − i/N)`.
pub fn discrepancy_sorted(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &v) in x.iter().enumerate() {
        let d = v - (i + 1) as f64 / n;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (1.0 / n + hi - lo).min(1.0)
}

/// Normalized positions `θ/2π ∈ [0, 1)` of the given angles, sorted.
pub fn circle_positions(angles: &[f64]) -> Vec<f64> {
    let mut x: Vec<f64> = angles
        .iter()
        .map(|a| {
            let v = (a / TAU).rem_euclid(1.0);
            if v >= 1.0 {
                0.0
            } else {
                v
            }
        })
        .collect();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    x
}

/// `D(N)` of `u_1, …, u_N`: the supremum over closed arcs of
/// `|fraction of points in the arc − arc length / 2π|`.
pub fn discrepancy(spec: &DirectionSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("discrepancy needs N >= 1".into()));
    }
    spec.validate()?;
    Ok(discrepancy_sorted(&circle_positions(&spec.angles(n))))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

/// Smallest `q ≤ max_q` with `α/π ≈ p/q`, if any.
pub fn rational_multiple_of_pi(alpha: f64, max_q: u32) -> Option<(i64, u32)> {
    let r = alpha / PI;
    (1..=max_q).find_map(|q| {
        let p = (r * q as f64).round();
        ((r * q as f64 - p).abs() <= 1e-9 * q as f64).then_some((p as i64, q))
    })
}
