use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use steinerlab::dynamics::{
    cauchy_diagnostics, iterate, monitor, write_cauchy_csv, write_checkpoints, write_monitor_csv, write_records_csv,
    IterateOptions,
};
use steinerlab::experiments::{reproduce, Verdict, EXPERIMENT_IDS};
use steinerlab::geom::Point;
use steinerlab::verify::{run_suite, Suite};
use steinerlab::{Error, Result};

use crate::config::{out_root, RunConfig};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    Failed = 2,
    Inconclusive = 3,
}

pub fn exit_code(e: &Error) -> Status {
    match e {
        Error::Invariant(_) => Status::Failed,
        _ => Status::Usage,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn manifest(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

pub fn run(cfg: RunConfig, inject_area_fault: Option<usize>) -> Result<Status> {
    let r = cfg.resolve()?;
    fs::create_dir_all(&r.out)?;
    write_json(&r.out.join("manifest.json"), &manifest("run", serde_json::to_value(&r)?))?;

    let anchors: Vec<Point<f64>> = r.anchors.iter().map(|&y| Point::new(0.0, y)).collect();
    let opt = IterateOptions {
        storage: Some(r.storage.clone()),
        simplify_tol: r.simplify_tol,
        record_diameter: true,
        anchors: anchors.clone(),
        inject_area_fault,
    };
    log::info!("iterating {} steps ({:?} mode, {})", r.big_m, r.mode, r.spec);
    let traj = iterate(&r.input, &r.spec_resolved, r.big_m, r.mode, &opt)?;

    write_checkpoints(&traj, r.out.join("checkpoints"))?;
    write_records_csv(&traj.records, r.out.join("records.csv"))?;
    log::info!("cauchy diagnostics at lags {:?}", r.lags);
    write_cauchy_csv(&cauchy_diagnostics(&traj, &r.lags, r.h)?, r.out.join("cauchy.csv"))?;
    log::info!("monitor with h = {}", r.h);
    let table = monitor(&traj, &r.deltas, &r.radii, &anchors, r.h)?;
    write_monitor_csv(&table, r.out.join("monitor.csv"))?;

    let violations = table.violations().len();
    if violations > 0 {
        log::warn!("monitor rose above tolerance at {violations} entries");
    }
    let last = traj.records.last().expect("at least one step");
    println!("{} steps written to {}", r.big_m, r.out.display());
    println!("final area {:.12e}", last.area);
    Ok(Status::Ok)
}

pub fn verify(suite: &str, n: usize, seed: u64, out: Option<PathBuf>) -> Result<Status> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    if n == 0 {
        return Err(Error::InvalidArgument("the number of cases must be at least 1".into()));
    }
    let out = out.unwrap_or_else(|| out_root().join("verify"));
    fs::create_dir_all(&out)?;
    write_json(
        &out.join("manifest.json"),
        &manifest("verify", json!({"suite": suite, "n_cases": n, "seed": seed, "out": out})),
    )?;
    let mut reports = Vec::new();
    let mut ok = true;
    for s in suites {
        log::info!("running {s} on {n} cases");
        let r = run_suite(s, n, seed)?;
        for p in &r.properties {
            let tag = if p.all_passed() { "ok" } else { "FAILED" };
            println!(
                "{s}/{}: {}/{} passed, worst excess {:.3e} {tag}",
                p.name, p.passed, p.cases, p.worst_excess
            );
            if !p.all_passed() {
                println!("  failing cases: {:?}", p.failures);
            }
        }
        ok &= r.all_passed();
        reports.push(r);
    }
    write_json(&out.join("verify.json"), &reports)?;
    Ok(if ok { Status::Ok } else { Status::Failed })
}

pub fn reproduce_cmd(id: &str, overrides: Value, out: Option<PathBuf>) -> Result<Status> {
    if !EXPERIMENT_IDS.contains(&id) {
        return Err(Error::InvalidArgument(format!(
            "unknown experiment `{id}`; valid ids: {}",
            EXPERIMENT_IDS.join(", ")
        )));
    }
    log::info!("reproducing {id} with overrides {overrides}");
    let run = reproduce(id, &overrides)?;
    let out = out.unwrap_or_else(|| out_root().join(id));
    run.write(&out)?;
    let rep = &run.report;
    write_json(
        &out.join("manifest.json"),
        &manifest(
            "reproduce",
            json!({"id": id, "overrides": overrides, "parameters": rep.parameters, "out": out}),
        ),
    )?;
    for c in &rep.checks {
        let tag = if c.passed { "ok" } else { "FAILED" };
        println!("{}: {:.6e} vs {:.6e} {tag}", c.name, c.value, c.threshold);
    }
    for (k, v) in &rep.certificates {
        println!("certificate {k} = {v:.6e}");
    }
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    let verdict = match rep.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    };
    println!("{id}: {verdict} ({})", out.display());
    Ok(match rep.verdict {
        Verdict::Pass => Status::Ok,
        Verdict::Fail => Status::Failed,
        Verdict::Inconclusive => Status::Inconclusive,
    })
}

/// `key=value`; the value is read as JSON when it parses, else as a string.
pub fn parse_param(s: &str) -> Result<(String, Value)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::parse("param", format!("expected key=value, got `{s}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::parse("param", format!("empty key in `{s}`")));
    }
    let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.to_string(), v))
}
