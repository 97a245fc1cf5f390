use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqc")).args(args).output().expect("pqc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_builtin(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["builtin"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = pqc(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON report")
}

#[test]
fn verify_heisenberg_n2_passes_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "heisenberg-n2.json", &["heisenberg", "--n", "2"]);
    let o = pqc(&["verify", f.to_str().unwrap(), "--suite", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["results"]["classification"], "FlatHeisenberg");
    for l in r["ledgers"].as_array().unwrap() {
        for e in l["entries"].as_array().unwrap() {
            assert!(!e["anchor"].as_str().unwrap().is_empty());
            assert_ne!(e["status"], "fail", "{e}");
        }
    }
}

#[test]
fn classify_l0_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "l0-c3.json", &["l0", "--c", "3"]);
    let o = pqc(&["classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("classification: FlatHeisenberg"));
}

#[test]
fn corrupted_model_exits_one_with_a_named_identity() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    let mut m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    m["structure_constants"][0][3] = serde_json::Value::String("-3".into());
    let bad = dir.path().join("corrupted.json");
    std::fs::write(&bad, serde_json::to_string(&m).unwrap()).unwrap();
    let o = pqc(&["verify", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["status"], "fail");
    let failing: Vec<String> = r["ledgers"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|l| l["entries"].as_array().unwrap().clone())
        .filter(|e| e["status"] == "fail")
        .map(|e| e["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failing, ["ccon.1"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pqc(&["verify", "/nonexistent/model.json"]).status.code(), Some(2));
    assert_eq!(pqc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pqc(&["builtin", "heisenberg", "--n", "0"]).status.code(), Some(2));
    assert_eq!(pqc(&["builtin", "l0", "--c", "x/y"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    assert_eq!(pqc(&["verify", f.to_str().unwrap(), "--suite", "bogus"]).status.code(), Some(2));
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(pqc(&["validate", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical_across_runs_and_thread_modes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    let p = f.to_str().unwrap();
    let a = pqc(&["verify", p, "--format", "json"]).stdout;
    let b = pqc(&["verify", p, "--format", "json"]).stdout;
    let c = pqc(&["verify", p, "--format", "json", "--sequential"]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn text_and_json_agree_on_pass_fail() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "c.json", &["conformal", "--n", "1"]);
    let p = f.to_str().unwrap();
    let r = json(&pqc(&["verify", p, "--format", "json"]));
    let text = stdout(&pqc(&["verify", p, "--format", "text"]));
    for l in r["ledgers"].as_array().unwrap() {
        for e in l["entries"].as_array().unwrap() {
            let id = e["id"].as_str().unwrap();
            let status = match e["status"].as_str().unwrap() {
                "pass" => "pass",
                "fail" => "FAIL",
                _ => "skipped",
            };
            assert!(
                text.lines().any(|line| {
                    let mut w = line.split_whitespace();
                    w.next() == Some(status) && w.next() == Some(id)
                }),
                "{status} {id}"
            );
        }
    }
    assert!(text.contains(&format!("status: {}", r["status"].as_str().unwrap())));
}

#[test]
fn gauge_records_the_seed_and_stays_valid() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    let out = dir.path().join("g.json");
    let o = pqc(&["gauge", f.to_str().unwrap(), "--seed", "17", "--rescale", "3/2", "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["seed"], 17);
    let v = pqc(&["classify", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("FlatHeisenberg"));
    let again = dir.path().join("g2.json");
    pqc(&["gauge", f.to_str().unwrap(), "--seed", "17", "--rescale", "3/2", "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn reeb_reports_the_fields() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    let r = json(&pqc(&["reeb", f.to_str().unwrap(), "--format", "json"]));
    assert_eq!(r["results"]["xi1"], "(0, 0, 0, 0, 1, 0, 0)");
    assert_eq!(r["status"], "pass");
}

#[test]
fn formal_sasakian_passes() {
    let o = pqc(&["formal-sasakian", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["ledgers"][0]["suite"], "formal-sasakian");
    assert_eq!(r["status"], "pass");
}

#[test]
fn builtin_without_out_prints_a_loadable_model() {
    let o = pqc(&["builtin", "heisenberg", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.json");
    std::fs::write(&f, &o.stdout).unwrap();
    assert_eq!(pqc(&["validate", f.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn single_suites_run_only_what_they_need() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_builtin(dir.path(), "h.json", &["heisenberg", "--n", "1"]);
    let r = json(&pqc(&["verify", f.to_str().unwrap(), "--suite", "bianchi", "--format", "json"]));
    let suites: Vec<&str> = r["ledgers"].as_array().unwrap().iter().map(|l| l["suite"].as_str().unwrap()).collect();
    assert!(suites.contains(&"bianchi"));
    assert!(!suites.contains(&"ricci") && !suites.contains(&"forms") && !suites.contains(&"classification"));
}
