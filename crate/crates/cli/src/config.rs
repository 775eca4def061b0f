//! Run configuration: a flat JSON object whose keys mirror the flags.
//!
//! ```json
//! {
//!   "set": "shape.json",          // or "builtin": "square"
//!   "spec": "powerlaw:0.5,0.75",
//!   "mode": "rotated",
//!   "M": 500,
//!   "h": 0.002,
//!   "out": "runs/a",
//!   "seed": 7,
//!   "simplify_tol": 1e-9,
//!   "lags": [1, 10],
//!   "deltas": [0.05],
//!   "radii": [0.1, 0.3],
//!   "anchors": [0.0],
//!   "keep_every": 5,
//!   "dense_tail": 50
//! }
//! ```
//!
//! Every key is optional. Command-line flags override the file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use steinerlab::dynamics::{Mode, StoragePlan};
use steinerlab::experiments::{resolve_input, DEFAULT_CELLS};
use steinerlab::geom::{diameter, read_set, CompactSet};
use steinerlab::sequences::DirectionSpec;
use steinerlab::{Error, Result};

pub const DEFAULT_SPEC: &str = "kronecker:1";
pub const DEFAULT_BUILTIN: &str = "square";
pub const DEFAULT_M: usize = 100;
pub const DEFAULT_OUT_ROOT: &str = "steinerlab-out";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub set: Option<PathBuf>,
    pub builtin: Option<String>,
    pub spec: Option<String>,
    pub mode: Option<Mode>,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub h: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub simplify_tol: Option<f64>,
    pub lags: Option<Vec<usize>>,
    pub deltas: Option<Vec<f64>>,
    pub radii: Option<Vec<f64>>,
    /// `y`-coordinates of the monitor anchors on the `y`-axis.
    pub anchors: Option<Vec<f64>>,
    pub keep_every: Option<usize>,
    pub dense_tail: Option<usize>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::parse("config", format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged(self, over: RunConfig) -> RunConfig {
        RunConfig {
            set: over.set.or(self.set),
            builtin: over.builtin.or(self.builtin),
            spec: over.spec.or(self.spec),
            mode: over.mode.or(self.mode),
            big_m: over.big_m.or(self.big_m),
            h: over.h.or(self.h),
            out: over.out.or(self.out),
            seed: over.seed.or(self.seed),
            simplify_tol: over.simplify_tol.or(self.simplify_tol),
            lags: over.lags.or(self.lags),
            deltas: over.deltas.or(self.deltas),
            radii: over.radii.or(self.radii),
            anchors: over.anchors.or(self.anchors),
            keep_every: over.keep_every.or(self.keep_every),
            dense_tail: over.dense_tail.or(self.dense_tail),
        }
    }
}

/// Fully resolved configuration, echoed into `manifest.json`.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedRun {
    pub set: Option<PathBuf>,
    pub builtin: Option<String>,
    pub spec: String,
    pub spec_resolved: DirectionSpec,
    pub mode: Mode,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub h: f64,
    pub out: PathBuf,
    pub seed: u64,
    pub simplify_tol: f64,
    pub lags: Vec<usize>,
    pub deltas: Vec<f64>,
    pub radii: Vec<f64>,
    pub anchors: Vec<f64>,
    pub storage: StoragePlan,
    #[serde(skip)]
    pub input: CompactSet<f64>,
}

/// Output root from `STEINERLAB_OUT`, else a local directory.
pub fn out_root() -> PathBuf {
    std::env::var_os("STEINERLAB_OUT")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT))
}

/// `iid` alone takes its seed from `--seed`.
pub fn spec_text(spec: &str, seed: u64) -> String {
    if spec.trim().eq_ignore_ascii_case("iid") {
        format!("iid:{seed}")
    } else {
        spec.to_string()
    }
}

pub fn load_input(set: Option<&Path>, builtin: Option<&str>) -> Result<CompactSet<f64>> {
    match (set, builtin) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument("give either --set or --builtin, not both".into())),
        (Some(p), None) => read_set(p),
        (None, Some(b)) => resolve_input(b),
        (None, None) => resolve_input(DEFAULT_BUILTIN),
    }
}

impl RunConfig {
    pub fn resolve(self) -> Result<ResolvedRun> {
        let builtin = match (&self.set, self.builtin) {
            (None, None) => Some(DEFAULT_BUILTIN.to_string()),
            (_, b) => b,
        };
        let input = load_input(self.set.as_deref(), builtin.as_deref())?;
        let seed = self.seed.unwrap_or(0);
        let spec = spec_text(self.spec.as_deref().unwrap_or(DEFAULT_SPEC), seed);
        let spec_resolved = DirectionSpec::parse(&spec)?;
        let big_m = self.big_m.unwrap_or(DEFAULT_M);
        if big_m == 0 {
            return Err(Error::parse("M", "must be at least 1"));
        }
        let diam = diameter(&input);
        let h = self.h.unwrap_or(diam / DEFAULT_CELLS);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::parse("h", format!("must be positive, got {h}")));
        }
        let simplify_tol = self.simplify_tol.unwrap_or(1e-9);
        if !(simplify_tol >= 0.0) {
            return Err(Error::parse("simplify_tol", "must be nonnegative"));
        }
        let scale = if diam > 0.0 { diam } else { 1.0 };
        let mut storage = StoragePlan::default_for(big_m);
        if let Some(k) = self.keep_every {
            if k == 0 {
                return Err(Error::parse("keep_every", "must be at least 1"));
            }
            storage.keep_every = k;
        }
        if let Some(t) = self.dense_tail {
            storage.dense_tail = t;
        }
        Ok(ResolvedRun {
            set: self.set,
            builtin: if input_is_file(&builtin) { None } else { builtin },
            spec,
            spec_resolved,
            mode: self.mode.unwrap_or(Mode::Plain),
            big_m,
            h,
            out: self.out.unwrap_or_else(|| out_root().join("run")),
            seed,
            simplify_tol,
            lags: self.lags.unwrap_or_else(|| vec![1, 10]),
            deltas: self.deltas.unwrap_or_else(|| vec![0.05 * scale]),
            radii: self.radii.unwrap_or_else(|| vec![0.1 * scale, 0.3 * scale]),
            anchors: self.anchors.unwrap_or_else(|| vec![0.0]),
            storage,
            input,
        })
    }
}

fn input_is_file(builtin: &Option<String>) -> bool {
    builtin.as_deref().is_some_and(|b| !steinerlab::experiments::builtin_names().contains(&b))
}
