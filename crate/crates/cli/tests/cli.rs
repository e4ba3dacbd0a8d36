use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn entroflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entroflow"))
        .args(args)
        .env_remove("ENTROFLOW_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn lemmas_pass() {
    let o = entroflow(&["lemmas", "--samples", "1000", "--max-size", "8", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.starts_with("check,samples,worst,"));
    for name in ["xlnx_gap", "mixing_gap", "contraction_gap", "joint_gap"] {
        assert!(report.contains(&format!("\n{name},")), "{name} missing");
    }
}

#[test]
fn lemmas_reject_zero_samples() {
    let o = entroflow(&["lemmas", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lemma_report_is_byte_identical() {
    let args = ["lemmas", "--samples", "300", "--seed", "5", "--format", "json"];
    let (a, b) = (entroflow(&args), entroflow(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["suite"], "lemmas");
}

#[test]
fn check_passes_and_reports_conservation() {
    let o = entroflow(&["check", "--max-dim", "16", "--trials", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("unitary_invariance,"))
        .unwrap()
        .to_string();
    let worst: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
    assert!((0.0..=1e-8).contains(&worst), "{line}");
}

#[test]
fn check_rejects_zero_trials() {
    assert_eq!(entroflow(&["check", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(entroflow(&["check", "--max-dim", "3"]).status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_entroflow"));
        c.args(["check", "--max-dim", "6", "--trials", "5"]);
        match seed {
            Some(s) => c.env("ENTROFLOW_SEED", s),
            None => c.env_remove("ENTROFLOW_SEED"),
        };
        c.output().unwrap().stdout
    };
    let flagged = entroflow(&["check", "--max-dim", "6", "--trials", "5", "--seed", "9"]).stdout;
    assert_eq!(run(Some("9")), flagged);
    assert_ne!(run(None), flagged);
}

#[test]
fn three_qubit_cycle() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.cfg", "dims = 2,2,2\ncycles = 20\nseed = 7\n");
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "cycle,time,information_nats,entropy_total,entropy_part_0,entropy_part_1,entropy_part_2,correlation_surrendered"
    );
    assert_eq!(lines.count(), 20);
    let s = column(&csv, "entropy_total");
    assert!(s.windows(2).all(|w| w[1] >= w[0] - 1e-8));
}

#[test]
fn cycle_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "run.json", r#"{"dims": [2, 3], "cycles": 6, "seed": 3, "trials": 4}"#);
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for out in [&a, &b] {
            let o = entroflow(&["cycle", &cfg, "--format", format, "--out", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            assert!(o.stdout.is_empty());
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(csv.starts_with("trial,cycle,"));
    assert_eq!(csv.lines().count(), 1 + 4 * 6);
}

#[test]
fn config_output_and_format_apply() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("traj.json");
    let cfg = write(
        dir.path(),
        "run.cfg",
        &format!("dims = 2,2\ncycles = 4\nformat = json\noutput = {}\n", out.display()),
    );
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_config_reports_line_and_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "dims = 2,2\ncycles = twenty\n");
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("cycles"), "{err}");

    let cfg = write(dir.path(), "bad.json", "{\"dims\": [2, 2],\n \"cycles\": \"x\"}");
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = entroflow(&["cycle", "/nonexistent/config"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_part_entropy_is_constant() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "one.cfg", "dims = 4\ncycles = 10\nseed = 2\ninitial_state = mixed\nrank = 3\n");
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = column(&stdout(&o), "entropy_total");
    assert_eq!(s.len(), 10);
    assert!(s.iter().all(|x| (x - s[0]).abs() <= 1e-9), "{s:?}");
}

#[test]
fn explicit_initial_state() {
    let dir = TempDir::new().unwrap();
    // |00⟩ with no coupling stays a product state, so nothing is surrendered.
    let cfg = write(
        dir.path(),
        "explicit.cfg",
        "dims = 2,2\ncycles = 5\ncoupling_strength = 0\ninitial_state = explicit\n\
         state_re = 1,0,0,0; 0,0,0,0; 0,0,0,0; 0,0,0,0\n",
    );
    let o = entroflow(&["cycle", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = column(&stdout(&o), "entropy_total");
    assert!(s.iter().all(|x| x.abs() <= 1e-8), "{s:?}");
}

#[test]
fn too_few_events_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "short.cfg", "dims = 2,2\ncycles = 1\n");
    assert_eq!(entroflow(&["cycle", &cfg]).status.code(), Some(2));
}

#[test]
fn unknown_format_is_a_usage_error() {
    assert_eq!(entroflow(&["lemmas", "--format", "xml"]).status.code(), Some(2));
}
