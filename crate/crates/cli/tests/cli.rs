use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn kohnlab(dir: &Path, args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_kohnlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not a JSON report ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().expect("exit code"), report)
}

fn domain(dir: &Path, name: &str, n: usize, gens: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let body = serde_json::json!({ "schema": "kohnlab/1", "n": n, "generators": gens });
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn type_reports_invariants() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1^2", "z2^3"]);
    let (code, report) = kohnlab(tmp.path(), &["type", s(&d)]);
    assert_eq!(code, 0);
    let r = &report["result"];
    assert_eq!(r["q_power"], 4);
    assert_eq!(r["colength_s"], 6);
    assert_eq!(r["p_exponent"]["exact"], 3);
    assert_eq!(r["dangelo_type"]["exact"], 6);

    let d = domain(tmp.path(), "lin.json", 2, &["z1", "z2"]);
    let (_, report) = kohnlab(tmp.path(), &["type", s(&d)]);
    let r = &report["result"];
    assert_eq!((r["q_power"].as_u64(), r["colength_s"].as_u64()), (Some(1), Some(1)));
    assert_eq!(r["dangelo_type"]["exact"], 2);
}

#[test]
fn type_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1^2"]);
    let (code, report) = kohnlab(tmp.path(), &["type", s(&d)]);
    assert_eq!(code, 3);
    assert_eq!(report["outcome"]["status"], "failure");
    assert_eq!(report["outcome"]["exit_code"], 3);

    let d = domain(tmp.path(), "bad.json", 2, &["z1^2", "z2^^3"]);
    let (code, report) = kohnlab(tmp.path(), &["type", s(&d)]);
    assert_eq!(code, 2);
    let msg = report["outcome"]["message"].as_str().unwrap();
    assert!(msg.contains("line 1") && msg.contains("column"), "{msg}");

    std::fs::write(tmp.path().join("broken.json"), "{\n  \"schema\": \"kohnlab/1\",\n  n: 2 }").unwrap();
    let (code, report) = kohnlab(tmp.path(), &["type", "broken.json"]);
    assert_eq!(code, 2);
    assert!(report["outcome"]["message"].as_str().unwrap().contains("line 3"));

    let (code, _) = kohnlab(tmp.path(), &["type", "missing.json"]);
    assert_eq!(code, 2);
}

#[test]
fn run_then_verify() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1", "z2"]);
    let (code, report) = kohnlab(tmp.path(), &["run", s(&d), "--out", "cert.json"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["artifacts"][0], "cert.json");
    let cert = read_json(&tmp.path().join("cert.json"));
    assert_eq!(cert["nodes"].as_array().unwrap().len(), 3);
    let terminal = cert["terminal"].as_u64().unwrap() as usize;
    assert_eq!(cert["nodes"][terminal]["epsilon"], "1/4");

    let (code, report) = kohnlab(tmp.path(), &["verify", "cert.json", s(&d)]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["accepted"], true);

    let d23 = domain(tmp.path(), "d23.json", 2, &["z1^2", "z2^3"]);
    let (code, _) = kohnlab(tmp.path(), &["run", s(&d23), "--out", "c23.json"]);
    assert_eq!(code, 0);
    let (code, report) = kohnlab(tmp.path(), &["verify", "c23.json", s(&d23)]);
    assert_eq!(code, 0);
    let eps = report["result"]["terminal_epsilon"].as_str().unwrap();
    assert!(eps.split('/').all(|part| part.parse::<u64>().is_ok()), "{eps}");
}

#[test]
fn tampered_and_mismatched_certificates_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1^2", "z2^3"]);
    assert_eq!(kohnlab(tmp.path(), &["run", s(&d), "--out", "cert.json"]).0, 0);

    let mut cert = read_json(&tmp.path().join("cert.json"));
    let terminal = cert["terminal"].as_u64().unwrap() as usize;
    cert["nodes"][terminal]["epsilon"] = Value::from("1");
    std::fs::write(tmp.path().join("tampered.json"), cert.to_string()).unwrap();
    let (code, report) = kohnlab(tmp.path(), &["verify", "tampered.json", s(&d)]);
    assert_eq!(code, 6);
    assert_eq!(report["result"]["failure"]["node"], terminal);
    assert!(report["outcome"]["message"].as_str().unwrap().contains(&format!("node {terminal}")));

    let other = domain(tmp.path(), "other.json", 2, &["z1^2", "z2^4"]);
    let (code, report) = kohnlab(tmp.path(), &["verify", "cert.json", s(&other)]);
    assert_eq!(code, 6);
    assert_eq!(report["result"]["failure"]["kind"], "PreMultiplier");

    std::fs::write(tmp.path().join("junk.json"), "not json").unwrap();
    assert_eq!(kohnlab(tmp.path(), &["verify", "junk.json", s(&d)]).0, 2);
}

#[test]
fn budget_exhaustion_exits_5() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1^3 + z2^4", "z1*z2^2 + z2^5"]);
    let (code, report) = kohnlab(tmp.path(), &["run", s(&d), "--max-spairs", "1"]);
    assert_eq!(code, 5, "{report}");
}

#[test]
fn suites() {
    let tmp = TempDir::new().unwrap();
    let (code, report) = kohnlab(tmp.path(), &["suite", "i5", "--seed", "1", "--cases", "50"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"][0]["passed"], 50);

    let (code, report) = kohnlab(tmp.path(), &["suite", "a4", "--seed", "2", "--cases", "30"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"][0]["failures"].as_array().unwrap().len(), 0);

    let (code, _) = kohnlab(tmp.path(), &["suite", "all", "--seed", "3", "--cases", "4", "--out", "all.json"]);
    assert_eq!(code, 0);
    let all = read_json(&tmp.path().join("all.json"));
    assert_eq!(all["suites"].as_array().unwrap().len(), 9);
    assert_eq!(all["passed"], true);

    assert_eq!(kohnlab(tmp.path(), &["suite", "b7"]).0, 2);
}

/// Runs `args` twice (artifact to `a`, then `b`) and compares the files.
fn assert_byte_identical(dir: &Path, args: &[&str]) {
    let mut files = Vec::new();
    for name in ["a.out", "b.out"] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out", name]);
        kohnlab(dir, &full);
        files.push(std::fs::read(dir.join(name)).unwrap());
    }
    assert_eq!(files[0], files[1], "{args:?}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let d = domain(dir, "d.json", 2, &["z1^3", "z2^4", "z1*z2^2"]);
    assert_byte_identical(dir, &["type", s(&d)]);
    assert_byte_identical(dir, &["run", s(&d), "--seed", "7"]);
    assert_eq!(kohnlab(dir, &["run", s(&d), "--out", "cert.json"]).0, 0);
    assert_byte_identical(dir, &["verify", "cert.json", s(&d)]);
    assert_byte_identical(dir, &["suite", "i6", "--seed", "4", "--cases", "8"]);

    // the worker count does not leak into results
    kohnlab(dir, &["suite", "iii4", "--cases", "6", "--jobs", "1", "--out", "seq.out"]);
    kohnlab(dir, &["suite", "iii4", "--cases", "6", "--jobs", "3", "--out", "par.out"]);
    assert_eq!(std::fs::read(dir.join("seq.out")).unwrap(), std::fs::read(dir.join("par.out")).unwrap());
}

#[test]
fn human_output_is_prose() {
    let tmp = TempDir::new().unwrap();
    let d = domain(tmp.path(), "d.json", 2, &["z1^2", "z2^3"]);
    let out = Command::new(env!("CARGO_BIN_EXE_kohnlab"))
        .current_dir(tmp.path())
        .args(["type", s(&d), "--human"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q = 4") && text.contains("type = 6"), "{text}");
}
