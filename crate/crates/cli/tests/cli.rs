use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pzk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzk")).args(args).env_remove("PZK_SEED").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn detect_srm_writes_a_deterministic_basis() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", r#"[[], ["0"], ["1"], ["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]]"#);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = pzk(&[
            "detect-srm",
            "--field",
            "5",
            "--m",
            "2",
            "--d",
            "2",
            "--H",
            "0,1",
            "--queries",
            &q,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(read(&a), read(&b));
    let v: Value = serde_json::from_str(&read(&a)).unwrap();
    // the sum equals both first-level sums, each of which equals two leaves
    assert_eq!(v["rank"], 3);
}

#[test]
fn detect_srm_rejects_a_degree_above_the_field_size() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", "[[]]");
    let o = pzk(&["detect-srm", "--field", "5", "--m", "2", "--d", "9", "--queries", &q]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds field size"));
}

#[test]
fn detect_bsrs_finds_the_dual_of_the_message_positions() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", "[0, 1, 2, 3, 4, 5, 6, 7]");
    let o = pzk(&["detect-bsrs", "--e", "4", "--dimL", "3", "--mu", "2", "--k", "5", "--queries", &q]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // 8 evaluations of a polynomial of degree below 2
    assert_eq!(json(&o)["rank"], 6);
}

#[test]
fn randomized_modes_need_a_seed() {
    assert_eq!(code(&pzk(&["sumcheck", "--micro"])), 2);
    let o =
        Command::new(env!("CARGO_BIN_EXE_pzk")).args(["sumcheck", "--micro"]).env("PZK_SEED", "5").output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, pzk(&["sumcheck", "--micro", "--seed", "5"]).stdout);
}

#[test]
fn sumcheck_exact_audit_on_the_micro_instance() {
    for v in ["peek-before-challenge", "zero-challenge", "query-line"] {
        let o = pzk(&["sumcheck", "--micro", "--mode", "audit-exact", "--verifier", v]);
        assert_eq!(code(&o), 0, "{v}");
        assert_eq!(json(&o)["result"], "exact-equal");
    }
    let o = pzk(&["sumcheck", "--micro", "--mode", "audit-exact", "--ldt-reps", "1", "--sc-trials", "1"]);
    assert_eq!(json(&o)["result"], "exact-equal");
}

#[test]
fn sumcheck_exact_audit_over_the_path_cap_is_a_usage_error() {
    let o = pzk(&[
        "sumcheck",
        "--micro",
        "--mode",
        "audit-exact",
        "--ldt-reps",
        "1",
        "--sc-trials",
        "1",
        "--max-paths",
        "10",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sumcheck_false_claim_fails_the_honest_run() {
    let o = pzk(&["sumcheck", "--micro", "--claim", "3", "--seed", "1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["result"], "rejected");
}

#[test]
fn sumcheck_cheat_sweep_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = pzk(&[
        "sumcheck",
        "--field",
        "17",
        "--m",
        "1",
        "--d",
        "2",
        "--mode",
        "cheat",
        "--trials",
        "300",
        "--seed",
        "3",
        "--jobs",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = read(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance-id,trials,accepts,rate,bound,pass"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1], "300");
    assert_eq!(row[5], "true");
    let report = json(&o);
    assert_eq!(report["sweep"]["accepts"].as_u64().unwrap().to_string(), row[2]);
    // the count is independent of the number of workers
    let one = pzk(&[
        "sumcheck", "--field", "17", "--m", "1", "--d", "2", "--mode", "cheat", "--trials", "300", "--seed", "3",
    ]);
    assert_eq!(json(&one)["sweep"], report["sweep"]);
}

#[test]
fn sharp3sat_sweeps_on_a_dimacs_file() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.dimacs", "c sample\np cnf 7 1\n1 -2 3 0\n");
    let o = pzk(&["sharp3sat", "--cnf", &cnf, "--mode", "honest", "--trials", "20", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["models"], 112);
    assert_eq!(json(&o)["sweep"]["accepts"], 20);
    let o = pzk(&["sharp3sat", "--cnf", &cnf, "--count", "113", "--mode", "cheat", "--trials", "500", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["sweep"]["pass"].as_bool().unwrap());
    let o = pzk(&["sharp3sat", "--cnf", &cnf, "--count", "112", "--mode", "cheat", "--seed", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mask_honest_run_writes_a_transcript() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.json");
    let o = pzk(&["mask-rs", "--dimL", "3", "--mu", "2", "--k", "5", "--seed", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["decision"], true);
    assert!(v["view"]["queries"].as_array().unwrap().len() > 8);
    let again = pzk(&["mask", "--seed", "4"]);
    assert_eq!(serde_json::from_slice::<Value>(&again.stdout).unwrap(), v);
}

#[test]
fn mask_exact_audit_and_simulation() {
    let o = pzk(&["mask", "--mode", "audit-exact", "--verifier", "zero-challenge"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"], "exact-equal");
    let o = pzk(&["mask", "--mode", "simulate", "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["simulator_queries"], v["verifier_queries"]);
}

#[test]
fn mask_cheat_stays_below_the_masked_bound() {
    let o = pzk(&["mask", "--mode", "cheat", "--reps", "2", "--trials", "400", "--seed", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn lacsp_modes() {
    let o = pzk(&["lacsp", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["decision"], true);
    let o = pzk(&["lacsp", "--micro", "--mode", "audit-exact", "--verifier", "adaptive"]);
    assert_eq!(json(&o)["result"], "exact-equal");
    let o = pzk(&["lacsp", "--mode", "simulate", "--verifier", "random-pair", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["footprint"].as_u64().unwrap() <= 4);
    // the honest verifier reads more than t / q = 4 positions
    assert_eq!(code(&pzk(&["lacsp", "--mode", "simulate", "--seed", "2"])), 2);
    let o = pzk(&["lacsp", "--mode", "cheat", "--delta", "0.25", "--trials", "500", "--seed", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn unknown_strategies_and_bad_witnesses_are_usage_errors() {
    assert_eq!(code(&pzk(&["mask", "--mode", "audit-exact", "--verifier", "nope"])), 2);
    let dir = TempDir::new().unwrap();
    let w = write(&dir, "w.json", r#"["1", "2", "3"]"#);
    assert_eq!(code(&pzk(&["lacsp", "--witness", &w, "--seed", "1"])), 2);
    assert_eq!(code(&pzk(&["sumcheck", "--mode", "bogus"])), 2);
}
