use std::fs;
use std::path::Path;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zerosum").chain(args.iter().copied());
    let code = zerosum_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    assert!(!out.is_empty(), "no output; stderr: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    (code, v)
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn table_show_beta_z2() {
    let (code, v) = run_json(&["table", "show", "--constant", "beta", "--group-family", "Z2"]);
    assert_eq!(code, 0);
    let rows: Vec<(u64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["d"].as_u64().unwrap(), e["value"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![(1, 2), (2, 3), (3, 4), (4, 6)]);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["provenance"] == "solved"));
}

#[test]
fn table_provenance_classes() {
    let (_, v) = run_json(&["table", "show"]);
    for e in v["entries"].as_array().unwrap() {
        let p = e["provenance"].as_str().unwrap();
        assert!(["solved", "published", "external"].contains(&p));
        assert!(!e["citation"].as_str().unwrap().is_empty());
    }
}

#[test]
fn solve_emits_witness_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.txt");
    let (code, v) = run_json(&["solve", "sr", "--group", "Z2^3", "--r", "4", "--emit-witness", &w]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], 7);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["witness_file"], w.as_str());
    let (code, out, _) = run(&["verify", "sequence", "--file", &w, "--r", "4"]);
    assert_eq!(code, 0, "{out}");

    // one more element forces a zero-sum subsequence
    let mut text = fs::read_to_string(&w).unwrap();
    text.push_str("1,1,0\n");
    fs::write(&w, text).unwrap();
    let env = path(dir.path(), "env.json");
    let (code, v) = run_json(&["verify", "sequence", "--file", &w, "--r", "4", "--emit-witness", &env]);
    assert_eq!(code, 1);
    assert_eq!(v["zero_sum_free"], false);
    let envelope: Value = serde_json::from_str(&fs::read_to_string(&env).unwrap()).unwrap();
    assert_eq!(envelope["sum_check"], "identity");
    assert_eq!(envelope["target_r"], 4);
}

#[test]
fn beta_example_values() {
    for (g, value) in [("Z2", 2), ("Z2^2", 3), ("Z2^3", 4), ("Z2^4", 6)] {
        let (code, v) = run_json(&["solve", "beta", "--group", g, "--r", "4"]);
        assert_eq!(code, 0);
        assert_eq!(v["value"], value, "{g}");
    }
}

#[test]
fn tampered_zero_free_set_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "set.txt");
    let (code, _, _) = run(&["solve", "beta", "--group", "Z2^3", "--r", "4", "--emit-witness", &f]);
    assert_eq!(code, 0);
    assert_eq!(run(&["verify", "zerofree", "--file", &f, "--r", "4"]).0, 0);

    let (_, set) = zerosum_core::io::parse_set(&fs::read_to_string(&f).unwrap(), None).unwrap();
    let spec: zerosum_core::GroupSpec = "Z2^3".parse().unwrap();
    // the sum of three members completes a zero-sum 4-subset
    let extra = spec.sum(&set[..3]);
    let mut text = fs::read_to_string(&f).unwrap();
    text.push_str(&format!("{extra}\n"));
    fs::write(&f, text).unwrap();
    let (code, out, _) = run(&["verify", "zerofree", "--file", &f, "--r", "4"]);
    assert_eq!(code, 1);
    assert!(out.contains("NOT zero-free") && out.contains(&format!("({extra})")), "{out}");
}

#[test]
fn certificates_round_trip_and_detect_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let c = path(dir.path(), "cert.json");
    assert_eq!(run(&["solve", "cap", "--d", "2", "--emit-cert", &c]).0, 0);
    let (code, v) = run_json(&["verify", "cert", "--file", &c, "--rerun"]);
    assert_eq!(code, 0);
    assert_eq!(v["check"]["rerun_value"], 4);

    let mut cert: Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    cert["witness"][3] = Value::from("2,2");
    fs::write(&c, cert.to_string()).unwrap();
    let (code, out, _) = run(&["verify", "cert", "--file", &c]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("INVALID"));

    // a wrong value makes the witness the wrong size
    cert["value"] = Value::from(5);
    fs::write(&c, cert.to_string()).unwrap();
    assert_eq!(run(&["verify", "cert", "--file", &c]).0, 2);
}

#[test]
fn budget_exhaustion_is_not_success() {
    let (code, v) = run_json(&["--budget-nodes", "5", "solve", "sr", "--group", "Z2^4", "--r", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["exhaustive"], false);
}

#[test]
fn element_cap_flag_applies() {
    let (code, _, err) = run(&["--element-cap", "8", "solve", "beta", "--group", "Z2^4", "--r", "4"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn constructions_validate() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "sidon.txt");
    let (code, v) = run_json(&["construct", "sidon", "--d", "4", "--out", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 6);
    assert_eq!(v["holds"], true);
    assert_eq!(run(&["verify", "sidon", "--file", &f]).0, 0);

    for args in [
        vec!["construct", "moment-curve", "--m", "2", "--k", "3"],
        vec!["construct", "moment-curve", "--m", "2", "--k", "4", "--modulus", "0x19"],
        vec!["construct", "egz-lower", "--m", "2", "--k", "3"],
        vec!["construct", "s4-lower", "--d", "3"],
    ] {
        let (code, v) = run_json(&args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["holds"], true);
    }
    // x^4 + x^2 + 1 is reducible
    assert_eq!(run(&["construct", "moment-curve", "--m", "2", "--k", "4", "--modulus", "0x15"]).0, 2);
}

#[test]
fn bound_calculators() {
    let (_, v) = run_json(&["bound", "bd", "--d", "5"]);
    assert_eq!(v["value"], 7);
    let (_, v) = run_json(&["bound", "s4-upper", "--d", "4"]);
    assert!(v["value"].as_u64().unwrap() >= 9);
    let (_, v) = run_json(&["bound", "cm", "--m", "2"]);
    assert_eq!(v["table"]["c_m_power"], "2");
    let (_, v) = run_json(&["bound", "eta"]);
    assert!((v["real"]["value"].as_f64().unwrap() - 2.7551).abs() < 1e-3);
    assert_eq!(run(&["bound", "bd", "--d", "0"]).0, 2);
}

#[test]
fn witness_certification() {
    let dir = tempfile::tempdir().unwrap();
    let h = path(dir.path(), "h.txt");
    let (code, v) = run_json(&["witness", "build", "--group", "Z2^2", "--r", "4", "--n", "12", "--certify", "--emit", &h]);
    assert_eq!(code, 0);
    let c = &v["certificate"];
    assert_eq!(c["alpha"], 5);
    assert_eq!(c["s"], 6);
    assert_eq!(c["max_codegree"], 3);
    assert_eq!(c["min_codegree"], 0);
    assert_eq!(c["verdict"], true);
    assert_eq!(v["s_source"], "table");
    let (code, v) = run_json(&["verify", "hypergraph", "--file", &h]);
    assert_eq!(code, 0);
    assert_eq!(v["alpha"], 5);

    // s given too small: alpha < s fails
    let (code, _) = run_json(&["witness", "build", "--group", "Z2^2", "--r", "4", "--n", "12", "--certify", "--s", "5"]);
    assert_eq!(code, 1);
    // s from a solver run
    let (code, v) = run_json(&["witness", "build", "--group", "Z2xZ4", "--r", "4", "--n", "16", "--certify"]);
    assert_eq!(code, 0);
    assert_eq!(v["s_source"], "solved");
    // too large for the exact independence search
    let (code, v) = run_json(&["witness", "build", "--group", "Z2", "--r", "2", "--n", "50", "--certify"]);
    assert_eq!(code, 1);
    assert_eq!(v["complete"], false);
}

#[test]
fn ledger_round_trip_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "t.csv");
    let ledger = path(dir.path(), "l.json");
    let (code, v) = run_json(&["bounds", "derive", "--with-reference", "--max-shift", "3", "--emit", &csv, "--ledger-out", &ledger]);
    assert_eq!(code, 0);
    let csv_text = fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("k,r,bound_num,bound_den,provenance\n"));
    assert_eq!(csv_text.lines().count() - 1, v["bounds"].as_array().unwrap().len());
    assert_eq!(run(&["bounds", "replay", "--file", &ledger]).0, 0);

    let mut facts: Value = serde_json::from_str(&fs::read_to_string(&ledger).unwrap()).unwrap();
    facts[0]["bound"] = serde_json::json!([1, 1000]);
    fs::write(&ledger, facts.to_string()).unwrap();
    let (code, out, _) = run(&["bounds", "replay", "--file", &ledger]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));

    let bases = path(dir.path(), "bases.json");
    fs::write(&bases, r#"[{"group":"Z3","r":3,"s":5,"source":"solved"}]"#).unwrap();
    let (code, v) = run_json(&["bounds", "derive", "--base-file", &bases, "--max-shift", "1"]);
    assert_eq!(code, 0);
    let rows = v["bounds"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["bound"], "1/3");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["solve"]).0, 2);
    assert_eq!(run(&["solve", "sr", "--group", "Z0", "--r", "2"]).0, 2);
    assert_eq!(run(&["table", "show", "--constant", "nope"]).0, 2);
    let (code, out, err) = run(&["--json", "verify", "sidon", "--file", "/nonexistent/file"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["schema"], 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn tampered_moment_curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "A.set");
    let (code, v) = run_json(&["construct", "moment-curve", "--m", "3", "--k", "2", "--out", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["claimed"]["zero_free"]["ranks"], serde_json::json!([2, 4, 6]));
    assert_eq!(run(&["verify", "zerofree", "--file", &f, "--r", "4"]).0, 0);

    let (spec, set) = zerosum_core::io::parse_set(&fs::read_to_string(&f).unwrap(), None).unwrap();
    let extra = spec.sum(&set[1..4]);
    let mut text = fs::read_to_string(&f).unwrap();
    text.push_str(&format!("{extra}\n"));
    fs::write(&f, text).unwrap();
    let (code, v) = run_json(&["verify", "zerofree", "--file", &f, "--r", "4"]);
    assert_eq!(code, 1);
    let violation: Vec<String> =
        v["violation"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    assert_eq!(violation.len(), 4);
    assert!(violation.contains(&extra.to_string()));
}
