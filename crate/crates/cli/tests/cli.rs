use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn abelaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelaut"))
        .args(args)
        .env_remove("ABELAUT_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Searches a triple at p = 3, n = 4 into `dir/t.json`.
fn triple(dir: &TempDir) -> PathBuf {
    let out = dir.path().join("t.json");
    let r = abelaut(&[
        "tat",
        "search",
        "--p",
        "3",
        "--n",
        "4",
        "--seed",
        "7",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    out
}

fn edited(dir: &TempDir, src: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(src).unwrap()).unwrap();
    edit(&mut v);
    let out = dir.path().join(name);
    std::fs::write(&out, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    out
}

fn build(dir: &TempDir, t: &Path, construction: &str) -> PathBuf {
    let out = dir.path().join(format!("{construction}.json"));
    let r = abelaut(&[
        "group",
        "build",
        "--input",
        path_str(t),
        "--construction",
        construction,
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    out
}

#[test]
fn search_writes_a_triple() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(t).unwrap()).unwrap();
    assert_eq!(v["p"], 3);
    assert_eq!(v["n"], 4);
    assert_eq!(v["f_rows"].as_array().unwrap().len(), 4);
}

#[test]
fn zero_budget_exhausts() {
    let r = abelaut(&["tat", "search", "--p", "3", "--n", "4", "--budget", "0"]);
    assert_eq!(code(&r), 3);
}

#[test]
fn small_dimension_is_rejected() {
    let r = abelaut(&["tat", "search", "--p", "3", "--n", "3"]);
    assert_eq!(code(&r), 2);
    let r = abelaut(&["tat", "search", "--p", "4", "--n", "4"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn verify_reports_each_condition() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let ok = abelaut(&["--format", "json", "tat", "verify", "--input", path_str(&t)]);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["centralizer"]["count"], 1);
    assert_eq!(v["centralizer"]["search_space"], 24_261_120u64);

    let zero = edited(&dir, &t, "zero.json", |v| {
        v["f_rows"] = serde_json::json!(vec![vec![0; 6]; 4])
    });
    let r = abelaut(&["--format", "json", "tat", "verify", "--input", path_str(&zero)]);
    assert_eq!(code(&r), 1);
    let v = json(&r);
    assert_eq!(v["wedge_condition"], true);
    assert_eq!(v["injective"], false);

    let bad_k = edited(&dir, &t, "bad_k.json", |v| {
        v["k_basis"] = serde_json::json!([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]])
    });
    let r = abelaut(&["--format", "json", "tat", "verify", "--input", path_str(&bad_k)]);
    assert_eq!(code(&r), 1);
    assert_eq!(json(&r)["wedge_condition"], false);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 3}").unwrap();
    assert_eq!(code(&abelaut(&["tat", "verify", "--input", path_str(&bad)])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&abelaut(&["tat", "verify", "--input", path_str(&missing)])), 2);
}

#[test]
fn extension_needs_height_two() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let r = abelaut(&[
        "group",
        "build",
        "--input",
        path_str(&t),
        "--construction",
        "extension",
        "--m",
        "1",
    ]);
    assert_eq!(code(&r), 2);
    let r = abelaut(&["group", "build", "--input", path_str(&t), "--construction", "nonsense"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn zurek_automorphisms_do_not_commute() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let g = build(&dir, &t, "zurek");
    let r = abelaut(&["--format", "json", "aut", "verify", "--input", path_str(&g)]);
    assert_eq!(code(&r), 0);
    let v = json(&r);
    assert_eq!(v["structure"], "nonabelian");
    assert_eq!(v["aut_equals_autc"], true);
    assert_eq!(v["witness"]["kind"], "non_commuting");
}

#[test]
fn analyze_reads_built_groups() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let expected = [
        ("special", "G'=Phi=Z", 10),
        ("zurek", "G'<Phi=Z", 14),
        ("central_product", "G'=Phi<Z", 11),
        ("extension", "G'<Phi=Z", 12),
    ];
    for (name, lattice, order) in expected {
        let g = build(&dir, &t, name);
        let r = abelaut(&["--format", "json", "group", "analyze", "--input", path_str(&g)]);
        assert_eq!(code(&r), 0, "{name}");
        let v = json(&r);
        assert_eq!(v["lattice"], lattice, "{name}");
        assert_eq!(v["order"]["exponent"], order, "{name}");
    }
}

#[test]
fn group_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let g = build(&dir, &t, "extension");
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    let copy = edited(&dir, &g, "copy.json", |_| {});
    let a = abelaut(&["--format", "json", "group", "analyze", "--input", path_str(&g)]);
    let b = abelaut(&["--format", "json", "group", "analyze", "--input", path_str(&copy)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first["construction"]["kind"], "extension");
    assert_eq!(first["construction"]["m"], 2);

    let tampered = edited(&dir, &g, "tampered.json", |v| v["p"] = serde_json::json!(5));
    assert_eq!(code(&abelaut(&["group", "analyze", "--input", path_str(&tampered)])), 2);
}

#[test]
fn full_check_passes_and_detects_corruption() {
    let dir = TempDir::new().unwrap();
    let r = abelaut(&["paper-check"]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
    assert!(stdout(&r).contains("all claims reproduced"));
    assert!(!stdout(&r).contains("FAIL"));

    let t = triple(&dir);
    let corrupt = edited(&dir, &t, "corrupt.json", |v| v["f_rows"][3] = v["f_rows"][2].clone());
    let r = abelaut(&["paper-check", "--input", path_str(&corrupt)]);
    assert_eq!(code(&r), 1);
    assert!(stdout(&r).contains("FAIL"));
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let g = build(&dir, &t, "central_product");
    for args in [
        vec!["tat", "verify", "--input", path_str(&t)],
        vec!["aut", "verify", "--input", path_str(&g)],
    ] {
        let runs: Vec<Vec<u8>> = ["1", "8"]
            .iter()
            .map(|w| {
                let mut full = vec!["--format", "json", "--workers", w];
                full.extend(&args);
                let r = abelaut(&full);
                assert_eq!(code(&r), 0);
                r.stdout
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
    }
}

#[test]
fn gl_budget_is_configurable() {
    let dir = TempDir::new().unwrap();
    let t = triple(&dir);
    let r = abelaut(&["--gl-budget", "1000", "tat", "verify", "--input", path_str(&t)]);
    assert_eq!(code(&r), 2);
    let r = Command::new(env!("CARGO_BIN_EXE_abelaut"))
        .args(["tat", "verify", "--input", path_str(&t)])
        .env("ABELAUT_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&r), 2);
    let r = abelaut(&["tat", "search", "--p", "5", "--n", "4"]);
    assert_eq!(code(&r), 2, "|GL(4,5)| exceeds the default budget");
    let r = abelaut(&["--gl-budget", "1000000000000", "tat", "search", "--p", "5", "--n", "4"]);
    assert_eq!(code(&r), 0);
}
