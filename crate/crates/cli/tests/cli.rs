use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbilat"))
        .args(args)
        .env_remove("QBILAT_SEED")
        .output()
        .unwrap()
}

fn run_line(line: &str) -> Output {
    run(&line.split_whitespace().collect::<Vec<_>>())
}

fn json_line(line: &str) -> Value {
    json(&line.split_whitespace().collect::<Vec<_>>())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn real(v: &Value) -> f64 {
    assert_eq!(v["value"][1].as_f64().unwrap(), 0.0);
    v["value"][0].as_f64().unwrap()
}

#[test]
fn phi_at_zero_argument_is_one() {
    let v = json_line("eval phi --upper 0.3,0.4+0.1i --lower 0.5 --q 0.5 --z 0 --format json");
    assert_eq!(real(&v), 1.0);
}

#[test]
fn psi_with_lower_q_matches_phi() {
    let psi = json_line("eval psi --upper 0.3,0.7 --lower 0.5,0.5 --q 0.5 --z 0.4 --format json");
    let phi = json_line("eval phi --upper 0.3,0.7 --lower 0.5 --q 0.5 --z 0.4 --format json");
    assert!((real(&psi) - real(&phi)).abs() < 1e-13);
}

#[test]
fn gauss_point_matches_products() {
    let phi = json_line("eval phi --upper 3,5 --lower 0.6 --q 0.5 --z 0.04 --format json");
    let num = json_line("eval product --args 0.2,0.12 --q 0.5 --format json");
    let den = json_line("eval product --args 0.6,0.04 --q 0.5 --format json");
    let expected = real(&num) / real(&den);
    assert!((real(&phi) - expected).abs() < 1e-13 * expected.abs());
}

#[test]
fn text_eval_reports_verdict() {
    let o = run_line("eval phi --upper 0.25 --q 0.5 --z -0.5i");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: converged"), "{out}");
    assert!(out.lines().next().unwrap().starts_with("value: "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run_line("eval phi --q 0.5").status.code(), Some(2));
    assert_eq!(run_line("eval phi --q 1.5 --z 0.1").status.code(), Some(2));
    assert_eq!(run_line("eval phi --upper 1+2j --q 0.5 --z 0.1").status.code(), Some(2));
    assert_eq!(run_line("eval product --q 0.5").status.code(), Some(2));
    assert_eq!(run_line("verify").status.code(), Some(2));
    let o = run_line("verify nope");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
}

#[test]
fn verify_passes_and_seed_env_applies() {
    let o = run_line("verify thm-3.1 --samples 50 --seed 7");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS thm-3.1"));

    let flag = json_line("verify thm-2.5 --samples 5 --seed 11 --format json");
    let o = Command::new(env!("CARGO_BIN_EXE_qbilat"))
        .args(["verify", "thm-2.5", "--samples", "5", "--format", "json"])
        .env("QBILAT_SEED", "11")
        .output()
        .unwrap();
    let env: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(env[0]["seed"], 11);
    assert_eq!(env[0]["samples"], flag[0]["samples"]);
}

#[test]
fn verify_all_writes_json_and_report_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let p = path.to_str().unwrap();
    let o = run(&["verify", "--all", "--samples", "3", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ids = json_line("list --format json");
    assert_eq!(v.as_array().unwrap().len(), ids.as_array().unwrap().len());
    for r in v.as_array().unwrap() {
        assert_eq!(r["schema_version"], "1");
        assert_eq!(r["summary"]["failed"], 0);
    }
    let o = run(&["report", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn csv_and_config_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qbilat.conf");
    std::fs::write(&cfg, "# defaults\nsamples = 4\nseed = 3\nformat = csv\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "verify", "eq-22-1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("id,index,params,"), "{out}");
    assert_eq!(out.lines().count(), 5);

    let o = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "verify",
        "eq-22-1",
        "--samples",
        "2",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["seed"], 3);
    assert_eq!(v[0]["samples"].as_array().unwrap().len(), 2);

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "list"]).status.code(), Some(2));
}

#[test]
fn list_covers_registry_in_stable_order() {
    let text = stdout(&run_line("list"));
    for id in ["thm-2.1", "cor-2.3", "thm-3.1"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{id}\t"))), "{id}");
    }
    let v = json_line("list --format json");
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), qbilat::registry().len());
    let ids: Vec<&str> = entries.iter().map(|e| e["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let back: Vec<qbilat::ManifestEntry> = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&back).unwrap(), v);
}

#[test]
fn failed_verification_exits_one() {
    let o = run_line("verify thm-2.1 --samples 5 --tol 1e-300");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL thm-2.1"));
}
