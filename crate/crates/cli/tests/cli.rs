use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spicy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spicy"))
        .args(args)
        .env_remove("SPICY_THREADS")
        .output()
        .expect("binary runs")
}

fn instance(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn partitions_table_and_euler_check() {
    let out = spicy(&["partitions", "--nmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    let q: Vec<&str> = json["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["q"].as_str().unwrap())
        .collect();
    assert_eq!(q, ["1", "1", "1", "2", "2", "3", "4"]);
    assert_eq!(json["euler"]["passed"], Value::Bool(true));
}

#[test]
fn bundled_instances_verify() {
    for name in ["exterior3.json", "polynomial2.json", "mixed2.json", "telescope.json", "swap.json"] {
        let out = spicy(&["verify", "--in", &instance(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let json = stdout_json(&out);
        assert_eq!(json["passed"], Value::Bool(true), "{name}");
    }
    let json = stdout_json(&spicy(&["verify", "--in", &instance("exterior3.json")]));
    let names: Vec<&str> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["bialgebra", "hopf-shape", "spicy"]);
}

#[test]
fn bundled_instances_are_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        ("exterior3.json", &["--kind", "exterior", "--n", "3"]),
        ("polynomial2.json", &["--kind", "polynomial", "--n", "2", "--m", "2"]),
        ("mixed2.json", &["--kind", "mixed", "--n", "2"]),
        ("telescope.json", &["--kind", "telescope", "--k-max", "20"]),
    ];
    for (name, flags) in cases {
        let path = dir.path().join(name);
        let mut args = vec!["model"];
        args.extend_from_slice(flags);
        args.extend(["--out", path.to_str().unwrap()]);
        assert_eq!(spicy(&args).status.code(), Some(0));
        assert_eq!(fs::read(&path).unwrap(), fs::read(instance(name)).unwrap(), "{name}");
    }
}

#[test]
fn telescope_is_sick_up_to_the_window() {
    let out = spicy(&["find-healthy", "--in", &instance("telescope.json"), "--orbit-bound", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "sick-up-to-window");
    for probe in json["probes"].as_array().unwrap() {
        assert_eq!(probe["outcome"]["status"], "sick");
        assert_eq!(probe["outcome"]["d"], 1);
    }
}

#[test]
fn swap_orbit_has_dimension_two() {
    let out = spicy(&[
        "find-healthy", "--in", &instance("swap.json"), "--vectors", "e1", "--words", "g",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "sick-up-to-window");
    assert_eq!(json["probes"][0]["outcome"]["d"], 2);
}

#[test]
fn shift_model_has_a_healthy_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shift.json");
    let built = spicy(&[
        "model", "--kind", "exterior", "--n", "21", "--max-degree", "1", "--max-value", "21",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(built.status.code(), Some(0), "{}", stderr(&built));
    let out = spicy(&["find-healthy", "--in", path.to_str().unwrap(), "--orbit-bound", "20"]);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "healthy-witness");
    let ranks: Vec<u64> = json["ranks"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    assert_eq!(ranks, (1..=21).collect::<Vec<u64>>());
}

#[test]
fn certificate_for_the_shift_model() {
    let out = spicy(&[
        "certify", "--kind", "exterior", "--n", "10", "--max-value", "10", "--nmax", "10", "--terse",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout_json(&out);
    let q = [1u64, 1, 2, 2, 3, 4, 5, 6, 8, 10];
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for (row, q) in rows.iter().zip(q) {
        assert_eq!(row["q"].as_str().unwrap(), q.to_string());
        assert!(row["rank_exact_sum"].as_u64().unwrap() >= q);
    }
}

#[test]
fn empty_and_truncated_certificates() {
    let empty = spicy(&["certify", "--kind", "exterior", "--n", "3", "--nmax", "0"]);
    assert_eq!(empty.status.code(), Some(0), "{}", stderr(&empty));
    assert_eq!(stdout_json(&empty)["rows"].as_array().unwrap().len(), 0);

    let short = spicy(&["certify", "--kind", "exterior", "--n", "5", "--max-degree", "2", "--nmax", "30"]);
    assert_eq!(short.status.code(), Some(0), "{}", stderr(&short));
    let json = stdout_json(&short);
    let certified = json["n_max_certified"].as_u64().unwrap();
    assert!(certified < 30);
    assert_eq!(json["rows"].as_array().unwrap().len() as u64, certified);
    assert!(json["truncation"].is_string());
}

#[test]
fn certificates_verify_their_digest() {
    let out = spicy(&["certify", "--kind", "exterior", "--n", "6", "--max-value", "6", "--nmax", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(spicy_core::format::verify_certificate_digest(&text).unwrap());
    let tampered = text.replacen("\"rank\": 1,", "\"rank\": 2,", 1);
    assert_ne!(tampered, text);
    assert!(!spicy_core::format::verify_certificate_digest(&tampered).unwrap());
}

#[test]
fn pbw_and_extract_commands() {
    let out = spicy(&["pbw", "--in", &instance("exterior3.json"), "--vectors", "x1;x2 + x1;x3 + x2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout_json(&out);
    assert_eq!(json["total_rank"], 8);

    let dependent = spicy(&["pbw", "--in", &instance("exterior3.json"), "--vectors", "x1;2*x1;x3"]);
    assert_eq!(dependent.status.code(), Some(2));
    assert!(stderr(&dependent).contains("E003"));

    let out = spicy(&[
        "extract", "--in", &instance("mixed2.json"), "--vectors", "x1 + y1y2;x2 + y1y2", "--c", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout_json(&out);
    assert_eq!(json["k"], 1);
    assert_eq!(json["vectors"], serde_json::json!(["-x1 + x2"]));
}

fn write_mutant(dir: &Path) -> PathBuf {
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(instance("exterior3.json")).unwrap()).unwrap();
    let entry = doc["coproduct"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["of"] == "x1x2")
        .unwrap();
    let term = entry["terms"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|t| t[1] == "x1" && t[2] == "x2")
        .unwrap();
    term[0] = Value::from("-1");
    let path = dir.join("mutant.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

#[test]
fn failed_check_exits_one_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_mutant(dir.path());
    let out = spicy(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["passed"], Value::Bool(false));
    assert_eq!(json["checks"][0]["counterexample"]["witness"], serde_json::json!(["x1", "x2"]));
    assert!(stderr(&out).contains("FAIL"));
}

#[test]
fn errors_exit_two_with_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format\": 1, \"unexpected\": true}").unwrap();
    let out = spicy(&["verify", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E001"), "{}", stderr(&out));

    let missing = spicy(&["verify", "--in", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("E001"));

    let narrow = dir.path().join("narrow.json");
    let built = spicy(&[
        "model", "--kind", "exterior", "--n", "3", "--max-degree", "2", "--out", narrow.to_str().unwrap(),
    ]);
    assert_eq!(built.status.code(), Some(0), "{}", stderr(&built));
    let window = spicy(&["pbw", "--in", narrow.to_str().unwrap()]);
    assert_eq!(window.status.code(), Some(2), "{}", stderr(&window));
    assert!(stderr(&window).contains("E002"), "{}", stderr(&window));

    let precondition = spicy(&["extract", "--in", &instance("mixed2.json"), "--vectors", "x1;y1", "--c", "3"]);
    assert_eq!(precondition.status.code(), Some(2));
    assert!(stderr(&precondition).contains("E003"), "{}", stderr(&precondition));

    let threads = Command::new(env!("CARGO_BIN_EXE_spicy"))
        .args(["partitions", "--nmax", "3"])
        .env("SPICY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let telescope = instance("telescope.json");
    let exterior = instance("exterior3.json");
    let mixed = instance("mixed2.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["partitions", "--nmax", "50"],
        vec!["model", "--kind", "polynomial", "--n", "3", "--m", "2"],
        vec!["verify", "--in", &exterior],
        vec!["pbw", "--in", &exterior],
        vec!["find-healthy", "--in", &telescope, "--orbit-bound", "20"],
        vec!["extract", "--in", &mixed, "--vectors", "x1 + y1y2;x2 + y1y2", "--c", "3"],
        vec!["certify", "--kind", "exterior", "--n", "12", "--max-value", "12", "--nmax", "12"],
    ];
    for args in commands {
        let first = spicy(&args);
        let second = spicy(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", stderr(&first));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = Command::new(env!("CARGO_BIN_EXE_spicy"))
            .args(["certify", "--kind", "exterior", "--n", "12", "--max-value", "12", "--nmax", "12"])
            .args(["--out", path.to_str().unwrap()])
            .env("SPICY_THREADS", if path == &a { "1" } else { "4" })
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn report_meta_only_touches_stderr() {
    let plain = spicy(&["partitions", "--nmax", "10"]);
    let meta = spicy(&["--report-meta", "partitions", "--nmax", "10"]);
    assert_eq!(plain.stdout, meta.stdout);
    assert_ne!(plain.stderr, meta.stderr);
}
