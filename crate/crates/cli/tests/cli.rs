use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn steinerlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinerlab"))
        .current_dir(dir)
        .env_remove("STEINERLAB_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

/// Relative path and contents of every file below `root`, sorted.
fn tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn run_on_builtin_square_writes_all_outputs() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["run", "--builtin", "square", "--spec", "kronecker:1", "-M", "20", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = tmp.path().join("r");
    for f in ["manifest.json", "records.csv", "cauchy.csv", "monitor.csv", "checkpoints/manifest.json"] {
        assert!(r.join(f).is_file(), "missing {f}");
    }
    assert!(r.join("checkpoints/step_0.json").is_file());
    assert!(r.join("checkpoints/step_20.json").is_file());
    let records = fs::read_to_string(r.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 22, "header, m = 0 and 20 steps");

    let m = manifest(&r);
    assert_eq!(m["command"], "run");
    assert_eq!(m["M"], 20);
    assert_eq!(m["mode"], "plain");
    assert_eq!(m["builtin"], "square");
    assert_eq!(m["spec_resolved"]["kind"], "kronecker");
    let h = m["h"].as_f64().unwrap();
    assert!((h - 2f64.sqrt() / 512.0).abs() < 1e-15, "{h}");
}

#[test]
fn flags_override_the_config_file() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("cfg.json"),
        r#"{"builtin": "ball", "spec": "powerlaw:0.5,0.75", "M": 3, "h": 0.01, "lags": [1]}"#,
    )
    .unwrap();
    let o = steinerlab(tmp.path(), &["run", "--config", "cfg.json", "-M", "5", "--builtin", "triangle", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = manifest(&tmp.path().join("r"));
    assert_eq!(m["M"], 5);
    assert_eq!(m["builtin"], "triangle");
    assert_eq!(m["h"], 0.01);
    assert_eq!(m["lags"], serde_json::json!([1]));
    assert_eq!(m["spec_resolved"]["kind"], "power_law");
}

#[test]
fn bare_iid_takes_the_seed_flag() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["run", "--spec", "iid", "--seed", "7", "-M", "3", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = manifest(&tmp.path().join("r"));
    assert_eq!(m["spec"], "iid:7");
    assert_eq!(m["seed"], 7);
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("cfg.json"), r#"{"steps": 10}"#).unwrap();
    let o = steinerlab(tmp.path(), &["run", "--config", "cfg.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("steps"), "{}", stderr(&o));
}

#[test]
fn malformed_set_file_names_the_field() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.json"), r#"{"regions": [[[0, 0], [1, 0], [1, "x"]]]}"#).unwrap();
    let o = steinerlab(tmp.path(), &["run", "--set", "bad.json", "-M", "3", "--out", "r"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("regions[0][2]"), "{}", stderr(&o));
}

#[test]
fn set_and_builtin_conflict() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["run", "--set", "a.json", "--builtin", "square"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&steinerlab(tmp.path(), &["run", "-M", "many"])), 1);
    assert_eq!(code(&steinerlab(tmp.path(), &["--help"])), 0);
}

#[test]
fn area_fault_exits_with_invariant_status() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["run", "-M", "10", "--inject-area-fault", "4", "--out", "r"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("invariant"), "{}", stderr(&o));
}

#[test]
fn run_outputs_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["run", "--builtin", "triangle", "--spec", "powerlaw:0.5,0.75", "--mode", "rotated", "-M", "15", "--out", "r"];
    assert_eq!(code(&steinerlab(a.path(), &args)), 0);
    assert_eq!(code(&steinerlab(b.path(), &args)), 0);
    let (ta, tb) = (tree(&a.path().join("r")), tree(&b.path().join("r")));
    assert!(ta.len() > 5);
    assert_eq!(ta, tb);
}

#[test]
fn default_output_root_comes_from_the_environment() {
    let tmp = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_steinerlab"))
        .current_dir(tmp.path())
        .env("STEINERLAB_OUT", "root")
        .args(["run", "-M", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(tmp.path().join("root/run/manifest.json").is_file());
}

#[test]
fn verify_exit_codes_and_report() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&steinerlab(tmp.path(), &["verify", "conservation", "0"])), 1);
    assert_eq!(code(&steinerlab(tmp.path(), &["verify", "everything", "5"])), 1);

    let o = steinerlab(tmp.path(), &["verify", "conservation", "10", "3", "--out", "v"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("conservation/area: 10/10 passed"), "{stdout}");
    let m = manifest(&tmp.path().join("v"));
    assert_eq!(m["n_cases"], 10);
    assert_eq!(m["seed"], 3);
    let reports: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(reports[0]["suite"], "conservation");
    assert_eq!(reports[0]["properties"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_experiment_lists_the_ids() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["reproduce", "ex9.9"]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    for id in ["ex2.1", "ex2.2", "ex2.3", "thm2.1", "thm5.1", "sec5-ud", "thm6.1"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn unknown_parameter_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["reproduce", "thm6.1", "--param", "bogus=1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));
}

#[test]
fn reproduce_writes_report_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["reproduce", "thm6.1", "-M", "40", "--out", "t"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = tmp.path().join("t");
    let report: Value = serde_json::from_str(&fs::read_to_string(t.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    let m = manifest(&t);
    assert_eq!(m["id"], "thm6.1");
    assert_eq!(m["overrides"]["M"], 40);
    assert_eq!(m["parameters"]["M"], 40);
}

#[test]
fn inconclusive_certificate_exits_3() {
    let tmp = TempDir::new().unwrap();
    let o = steinerlab(tmp.path(), &["reproduce", "ex2.2", "--builtin", "ball", "--out", "e"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("inconclusive"));
}

#[test]
fn params_and_config_merge() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("o.json"), r#"{"M": 30, "factor": 2.0}"#).unwrap();
    let o = steinerlab(
        tmp.path(),
        &["reproduce", "thm6.1", "--config", "o.json", "--param", "M=24", "--out", "t"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = manifest(&tmp.path().join("t"));
    assert_eq!(m["parameters"]["M"], 24);
    assert_eq!(m["parameters"]["factor"], 2.0);
}
