use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coupled-wigner")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

// Short sweeps keep these fast; the full runs live in the acceptance target.
const SHORT_FIG1: &[&str] = &["--set", "numeric.theta_max=pi/8", "--set", "numeric.theta_step=pi/40"];
const SHORT_FIG3: &[&str] = &["--set", "numeric.time_max=1"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn queries_print_one_value() {
    let o = tool(&["query", "eigen", "--set", "physics.k=1", "--set", "physics.l=0", "--set", "physics.gamma=0.1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2.1\n");

    let o = tool(&["query", "coherence", "--set", "query.state=thermal(3)"]);
    assert_eq!(stdout(&o), "0 bits\n");

    let o = tool(&["query", "fidelity", "--set", "query.state=vacuum", "--set", "query.reference=thermal(4)"]);
    let f: f64 = stdout(&o).trim().parse().unwrap();
    assert!((f - 0.2).abs() < 1e-12);

    let o = tool(&["query", "negativity"]);
    let d: f64 = stdout(&o).trim().parse().unwrap();
    assert!((d - 0.426_122_6).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let o = tool(&["query", "eigen", "--set", "physics.spin=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));

    assert_eq!(tool(&["fig1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(tool(&["query", "fig1"]).status.code(), Some(2));
    assert_eq!(tool(&["fig1", "--config", "/nonexistent/run.cfg"]).status.code(), Some(2));
    assert_eq!(tool(&["query", "coherence", "--set", "query.state=displaced_thermal(0,0,0.5)"]).status.code(), Some(2));
    assert_eq!(tool(&["fig3", "--set", "numeric.max_step=1"]).status.code(), Some(2));

    // no room to refine: the doubling protocol cannot confirm convergence
    let o = tool(&["query", "negativity", "--set", "numeric.max_grid_points=129"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn csv_headers() {
    let o = tool(&with(&["fig1"], SHORT_FIG1));
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,mutual_information,negativity_mode1,negativity_mode2"));
    assert_eq!(lines.count(), 6);

    let o = tool(&with(&["fig3"], SHORT_FIG3));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t,fidelity,coherence_normalized,coherence_raw"));
    let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(first[2], 1.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("backflow intervals"));
}

fn check_json(path: &Path, columns: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    let len = obj[columns[0]].as_array().unwrap().len();
    assert!(len > 0);
    for c in columns {
        let col = obj[*c].as_array().unwrap();
        assert_eq!(col.len(), len, "{c}");
        assert!(col.iter().all(Value::is_f64), "{c}");
    }
    let meta = obj["metadata"].as_object().unwrap();
    assert!(meta["version"].is_string());
    assert!(meta["config"].as_object().unwrap().contains_key("physics.gamma"));
    v
}

#[test]
fn json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("fig1.json");
    let args = with(&["fig1", "--format", "json", "--out", p1.to_str().unwrap()], SHORT_FIG1);
    assert!(tool(&args).status.success());
    let v = check_json(&p1, &["theta", "mutual_information", "negativity_mode1", "negativity_mode2"]);
    assert_eq!(v["metadata"]["config"]["output.format"], "json");

    let p3 = dir.path().join("fig3.json");
    let args = with(&["fig3", "--format", "json", "--out", p3.to_str().unwrap()], SHORT_FIG3);
    let o = tool(&args);
    assert!(o.status.success());
    assert!(stdout(&o).contains("backflow intervals"));
    let v = check_json(&p3, &["t", "fidelity", "coherence_normalized", "coherence_raw"]);
    assert!(v["backflow_intervals"].is_array());
    assert!(v["coherence_increase_intervals"].is_array());
}

#[test]
fn dump_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let args = with(&["fig3", "--set", "physics.gamma=0.2", "--out", out_a.to_str().unwrap()], SHORT_FIG3);
    assert!(tool(&args).status.success());

    let dumped = tool(&with(&args, &["--dump-config"]));
    assert!(dumped.status.success());
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, stdout(&dumped)).unwrap();

    let out_b = dir.path().join("b.csv");
    let o = tool(&["fig3", "--config", cfg.to_str().unwrap(), "--out", out_b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());

    // the dump itself is a fixed point
    let again = tool(&["fig3", "--config", cfg.to_str().unwrap(), "--out", out_a.to_str().unwrap(), "--dump-config"]);
    assert_eq!(stdout(&again), stdout(&dumped));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "experiment = eigen\nphysics.gamma = 0.3\nphysics.k = 2\n").unwrap();
    let o = tool(&["query", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&o), "3.6\n");
    let o = tool(&["query", "--config", cfg.to_str().unwrap(), "--set", "physics.gamma=0"]);
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn inset_goes_to_second_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let args = with(&["fig3", "--set", "fig3.inset=true", "--out", out.to_str().unwrap()], SHORT_FIG3);
    let o = tool(&args);
    assert!(o.status.success());
    let inset = dir.path().join("fig3_inset.csv");
    let text = std::fs::read_to_string(inset).unwrap();
    let fid: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(fid.windows(2).all(|w| w[1] >= w[0]));
    assert!(stdout(&o).contains("gamma = 0\n"));
}
