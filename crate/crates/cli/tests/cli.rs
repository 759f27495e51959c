use std::path::Path;
use std::process::{Command, Output};

use gagc_cli::io::MatrixFile;
use gagc_core::gf::Fe;

fn gagc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gagc"))
        .args(args)
        .env_remove("GAGC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("c.mat");
    let rep = dir.path().join("c.json");
    let o = gagc(&[
        "construct",
        "--p",
        "2",
        "--h",
        "4",
        "--e",
        "1",
        "--theorem",
        "t6",
        "--n",
        "16",
        "--k",
        "5",
        "--out",
        path_str(&mat),
        "--report",
        path_str(&rep),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["length"], 32);
    assert_eq!(report["dimension"], 3);
    assert_eq!(report["theorem"], "t6");
    for key in ["galois_so", "dimension", "mds", "criterion"] {
        assert_ne!(report["checks"][key]["verdict"], "fail", "{key}");
    }
    let text = std::fs::read_to_string(&mat).unwrap();
    assert_eq!(MatrixFile::parse(&text).unwrap().emit(), text);
    let o = gagc(&["verify", "--in", path_str(&mat)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn window_violation_exits_two() {
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "8",
        "--e",
        "1",
        "--theorem",
        "t3",
        "--t",
        "0",
        "--k",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("1 <= k"), "{}", stdout(&o));
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "8",
        "--e",
        "1",
        "--theorem",
        "t3",
        "--t",
        "0",
        "--k",
        "411",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_flag_is_a_precondition() {
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "8",
        "--e",
        "1",
        "--theorem",
        "t3",
        "--k",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("--t"));
}

#[test]
fn unknown_field_exits_two() {
    let o = gagc(&["search", "--p", "6", "--h", "1", "--e", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_and_missing_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mat");
    std::fs::write(&bad, "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1 1\n").unwrap();
    assert_eq!(gagc(&["verify", "--in", path_str(&bad)]).status.code(), Some(3));
    let missing = dir.path().join("missing.mat");
    assert_eq!(gagc(&["verify", "--in", path_str(&missing)]).status.code(), Some(3));
    assert_eq!(gagc(&["embed", "--in", path_str(&missing)]).status.code(), Some(3));
}

#[test]
fn corrupted_entry_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("c.mat");
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "2",
        "--e",
        "1",
        "--theorem",
        "t7",
        "--case",
        "2",
        "--t",
        "3",
        "--k",
        "7",
        "--out",
        path_str(&mat),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let mut m = MatrixFile::read(&mat).unwrap();
    let x = m.gen.get(1, 5);
    m.gen.set(1, 5, m.ctx.add(x, Fe::ONE));
    m.write(&mat).unwrap();
    let o = gagc(&["verify", "--in", path_str(&mat)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("galois_so  fail"), "{}", stdout(&o));
}

#[test]
fn wrong_e_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("c.mat");
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "8",
        "--e",
        "1",
        "--theorem",
        "t3",
        "--t",
        "1",
        "--k",
        "10",
        "--out",
        path_str(&mat),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(gagc(&["verify", "--in", path_str(&mat)]).status.code(), Some(0));
    for e in ["0", "2"] {
        assert_eq!(
            gagc(&["verify", "--in", path_str(&mat), "--e", e]).status.code(),
            Some(1)
        );
    }
}

#[test]
fn embed_without_gamma_exits_two() {
    // Over GF(27) with e = 1, -1 has odd discrete log and no fourth root.
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("line.mat");
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "3",
        "--e",
        "1",
        "--theorem",
        "line",
        "--k",
        "1",
        "--nodes",
        "0,1,2,3,14",
        "--out",
        path_str(&mat),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gagc(&["embed", "--in", path_str(&mat)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no gamma"), "{}", stdout(&o));
}

#[test]
fn embed_needs_grs_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("plain.mat");
    std::fs::write(&mat, "GFMAT p=3 h=2 poly=2,1,1 n=4 k=1 e=1\n1 1 1 1\n").unwrap();
    assert_eq!(gagc(&["embed", "--in", path_str(&mat)]).status.code(), Some(2));
}

#[test]
fn embed_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.mat"), dir.path().join("b.mat"));
    let o = gagc(&[
        "construct",
        "--p",
        "3",
        "--h",
        "8",
        "--e",
        "1",
        "--theorem",
        "t3",
        "--t",
        "0",
        "--k",
        "12",
        "--out",
        path_str(&a),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = gagc(&["embed", "--in", path_str(&a), "--out", path_str(&b)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("embedding case 2"));
    let m = MatrixFile::read(&b).unwrap();
    assert_eq!((m.gen.rows(), m.gen.cols()), (13, 1641));
    assert_eq!(gagc(&["verify", "--in", path_str(&b)]).status.code(), Some(0));
}

#[test]
fn search_tables() {
    let o = gagc(&["search", "--p", "3", "--h", "2", "--e", "1", "--theorem", "t3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    let o = gagc(&[
        "search",
        "--p",
        "2",
        "--h",
        "8",
        "--e",
        "2",
        "--theorem",
        "t6",
        "--format",
        "json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let windows: Vec<(u64, u64)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["k_min"].as_u64().unwrap(), r["k_max"].as_u64().unwrap()))
        .collect();
    assert_eq!(windows, [(17, 24), (17, 38), (17, 106)]);
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "--p", "3", "--h", "4", "--e", "1"];
    assert_eq!(stdout(&gagc(&args)), stdout(&gagc(&args)));
}

#[test]
fn seed_override_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_gagc"))
        .args([
            "construct",
            "--p",
            "3",
            "--h",
            "8",
            "--e",
            "1",
            "--theorem",
            "t3",
            "--t",
            "0",
            "--k",
            "3",
            "--report",
            path_str(&rep),
        ])
        .env("GAGC_SEED", "0x10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["seed"], 16);
}

#[test]
fn quick_selftest_reports_every_suite() {
    let o = gagc(&["selftest", "--level", "quick"]);
    let out = stdout(&o);
    for name in gagc_cli::selftest::suite_names() {
        assert!(out.contains(name), "{name} missing from\n{out}");
    }
    let all_pass = out.lines().filter(|l| l.starts_with("FAIL")).count() == 0;
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}
