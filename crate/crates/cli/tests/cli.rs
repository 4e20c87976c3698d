use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn s2t(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s2t")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_str().unwrap().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bootstrapped(dir: &Path) -> PathBuf {
    let o = s2t(&["bootstrap", "--config", &fixture("h6.json"), "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir.join("tower.json")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn tower(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["tower", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    s2t(&args)
}

#[test]
fn bootstrap_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    assert!(state.exists() && tmp.path().join("certs/0000-bootstrap.json").exists());
    let o = s2t(&["verify", "--state", state.to_str().unwrap(), "--radius", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report = json(&tmp.path().join("report.json"));
    assert_eq!(report["pass"], json!(true));
    assert_eq!(report["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn bootstrap_rejects_hypothesis_violations() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("odd");
    let o = s2t(&["bootstrap", "--config", &fixture("odd-codimension.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("determinant"), "{}", stderr(&o));
    assert!(!out.join("tower.json").exists());

    let out = tmp.path().join("inv");
    let o = s2t(&["bootstrap", "--config", &fixture("h6-involution.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("involution s"), "{}", stderr(&o));

    let o = s2t(&["bootstrap", "--config", &fixture("missing.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bootstrap_refuses_to_overwrite() {
    let tmp = tempfile::tempdir().unwrap();
    bootstrapped(tmp.path());
    let o = s2t(&["bootstrap", "--config", &fixture("h6.json"), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("already exists"));
}

#[test]
fn zero_stages_is_a_no_op() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    let before = fs::read(&state).unwrap();
    let o = tower(tmp.path(), &["--stages", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read(&state).unwrap(), before);
}

#[test]
fn ledger_grows_by_the_handled_candidates() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    let before = json(&state)["ledger"].as_array().unwrap().len();
    let o = tower(tmp.path(), &["--stages", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let after = json(&state)["ledger"].as_array().unwrap().len();
    let recorded =
        report["handled"].as_array().unwrap().iter().filter(|h| h["case"] != json!("needsReduction")).count();
    assert_eq!(after - before, recorded);
    assert_eq!(json(&state)["stage"], json!(3));
    for k in 1..=3 {
        assert!(tmp.path().join(format!("certs/{k:04}-f{k}.json")).exists());
    }
}

#[test]
fn interrupted_run_resumes_to_the_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    bootstrapped(&a);
    bootstrapped(&b);
    assert_eq!(code(&tower(&a, &["--stages", "1"])), 0);
    let o = tower(&a, &["--stages", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--resume"));
    assert_eq!(code(&tower(&a, &["--stages", "3", "--resume"])), 0);
    assert_eq!(code(&tower(&b, &["--stages", "3"])), 0);
    assert_eq!(fs::read(a.join("tower.json")).unwrap(), fs::read(b.join("tower.json")).unwrap());
    for k in 0..=3 {
        let name = if k == 0 { "0000-bootstrap.json".to_string() } else { format!("{k:04}-f{k}.json") };
        assert_eq!(fs::read(a.join("certs").join(&name)).unwrap(), fs::read(b.join("certs").join(&name)).unwrap());
    }
    // a completed budget changes nothing
    let before = fs::read(a.join("tower.json")).unwrap();
    assert_eq!(code(&tower(&a, &["--stages", "3", "--resume"])), 0);
    assert_eq!(fs::read(a.join("tower.json")).unwrap(), before);
}

#[test]
fn tampered_ledger_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    assert_eq!(code(&tower(tmp.path(), &["--stages", "1"])), 0);
    let mut s = json(&state);
    let entry = s["ledger"].as_array_mut().unwrap().iter_mut().find(|e| e["case"] == json!("free")).unwrap();
    entry["f"] = json!([{"gen": "a0", "pow": 2}]);
    fs::write(&state, serde_json::to_string_pretty(&s).unwrap()).unwrap();
    let o = s2t(&["verify", "--out", tmp.path().to_str().unwrap(), "--radius", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL sharp 2-transitivity witnesses"), "{}", stdout(&o));
    let report = json(&tmp.path().join("report.json"));
    let check = report["checks"].as_array().unwrap().iter().find(|c| c["pass"] == json!(false)).unwrap();
    assert_eq!(check["witnesses"][0]["words"][0], json!([{"gen": "u", "pow": 1}]));
}

#[test]
fn a_containing_t_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    let mut s = json(&state);
    s["Agens"] = json!([[{"gen": "t", "pow": 1}]]);
    fs::write(&state, serde_json::to_string_pretty(&s).unwrap()).unwrap();
    let o = s2t(&["verify", "--out", tmp.path().to_str().unwrap(), "--radius", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL no involutions in A"), "{}", stdout(&o));
}

#[test]
fn verify_input_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let o = s2t(&["verify", "--state", tmp.path().join("none.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"n\": 6}").unwrap();
    assert_eq!(code(&s2t(&["verify", "--state", bad.to_str().unwrap()])), 2);
}

#[test]
fn certificate_show_and_replay() {
    let tmp = tempfile::tempdir().unwrap();
    bootstrapped(tmp.path());
    let cert = tmp.path().join("certs/0000-bootstrap.json");
    let o = s2t(&["cert", "show", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("L = ") && text.contains("radius: 4") && text.contains("words checked: "), "{text}");
    let o = s2t(&["cert", "replay", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("replay agrees"));

    let mut c = json(&cert);
    let l: i64 = c["scheme"]["L"].as_str().unwrap().parse().unwrap();
    c["scheme"]["L"] = json!((l * 2).to_string());
    let altered = tmp.path().join("altered.json");
    fs::write(&altered, serde_json::to_string(&c).unwrap()).unwrap();
    let o = s2t(&["cert", "replay", altered.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("mismatch"), "{}", stdout(&o));

    fs::write(&altered, "not json").unwrap();
    assert_eq!(code(&s2t(&["cert", "replay", altered.to_str().unwrap()])), 2);
}

#[test]
fn lock_file_blocks_a_second_writer() {
    let tmp = tempfile::tempdir().unwrap();
    bootstrapped(tmp.path());
    let lock = tmp.path().join("tower.json.lock");
    fs::write(&lock, "1").unwrap();
    let o = tower(tmp.path(), &["--stages", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("locked"));
    fs::remove_file(&lock).unwrap();
    assert_eq!(code(&tower(tmp.path(), &["--stages", "1"])), 0);
    assert!(!lock.exists());
}

#[test]
fn config_mismatch_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    bootstrapped(tmp.path());
    let mut c = json(&tmp.path().join("config.json"));
    c["seed"] = json!(8);
    let other = tmp.path().join("other.json");
    fs::write(&other, serde_json::to_string(&c).unwrap()).unwrap();
    let o = tower(tmp.path(), &["--config", other.to_str().unwrap(), "--stages", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("does not match"));
}

#[test]
fn artifacts_carry_hash_and_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let state = bootstrapped(tmp.path());
    assert_eq!(code(&tower(tmp.path(), &["--stages", "1"])), 0);
    assert_eq!(code(&s2t(&["verify", "--out", tmp.path().to_str().unwrap(), "--radius", "2"])), 0);
    let s = json(&state);
    let hash = s["configHash"].as_str().unwrap().to_string();
    assert_eq!(hash.len(), 64);
    assert_eq!(s["seed"], json!(7));
    let report = json(&tmp.path().join("report.json"));
    assert_eq!(report["configHash"], json!(hash));
    assert_eq!(report["seed"], json!(7));
    for entry in fs::read_dir(tmp.path().join("certs")).unwrap() {
        let c = json(&entry.unwrap().path());
        assert_eq!(c["configHash"], json!(hash));
        assert!(c["seed"].is_u64());
    }
}
