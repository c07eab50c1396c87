use std::path::Path;
use std::process::{Command, Output};

const CANONICAL: &str = r#"{"ci_r": 60, "cp_r": 1, "m_r": 3000, "ci_f": 82, "cp_f": 20,
 "m_f": 4000, "cl": 200, "d1": 2000, "d2": 8000"#;

fn mcost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcost"))
        .args(args)
        .env_remove("LRMC_TOL_GAP")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, extra: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format!("{CANONICAL}{extra}}}")).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_canonical_text() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "");
    let o = mcost(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("group        6 (cluster 1, peak period 2)"), "{s}");
    assert!(s.contains("LRMC         (1, 102)"));
    assert!(s.contains("SRMC         (1, 20)"));
    assert!(s.contains("LRMC profit  246000"));
    assert!(s.contains("(not recovered)"));
    assert!(s.contains("cross-check  pass"));
}

#[test]
fn run_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let extra = format!(r#", "format": "json", "output": {:?}"#, out.to_string_lossy());
    let cfg = write_config(dir.path(), "c.json", &extra);
    let o = mcost(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["group"]["id"], 6);
    assert_eq!(v["lrmc"], serde_json::json!([1.0, 102.0]));
    assert_eq!(v["lrmc_recovery"]["recovered"], true);
    assert_eq!(v["srmc_recovery"]["recovered"], false);
}

#[test]
fn cheap_loadshed_is_group_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, format!("{}, \"format\": \"csv\"}}", CANONICAL.replace("\"cl\": 200", "\"cl\": 20"))).unwrap();
    let o = mcost(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(&row[14..16], ["20", "20"]);
}

#[test]
fn malformed_field_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, CANONICAL.replace("\"m_f\"", "\"mf\"") + "}").unwrap();
    let o = mcost(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mf") && err.contains("line"), "{err}");
}

#[test]
fn violated_assumption_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, CANONICAL.replace("\"cp_f\": 20", "\"cp_f\": 0.5") + "}").unwrap();
    let o = mcost(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CP_r < CP_f"));
}

#[test]
fn degenerate_sweep_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#", "sweep": [{"param": "d2", "from": 3000, "to": 3000, "steps": 2}]"#,
    );
    assert_eq!(mcost(&["sweep", &cfg]).status.code(), Some(1));
    let three = r#", "sweep": [{"param": "d1", "from": 1, "to": 2, "steps": 2},
        {"param": "d2", "from": 1, "to": 2, "steps": 2}, {"param": "cl", "from": 1, "to": 2, "steps": 2}]"#;
    let cfg = write_config(dir.path(), "s3.json", three);
    assert_eq!(mcost(&["sweep", &cfg]).status.code(), Some(1));
}

#[test]
fn sweep_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#", "format": "csv", "sweep": [{"param": "d1", "from": 0, "to": 4000, "steps": 9},
            {"param": "cl", "from": 20, "to": 120, "steps": 6}]"#,
    );
    let a = mcost(&["sweep", &cfg]);
    let b = mcost(&["sweep", &cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert_eq!(s.lines().count(), 1 + 9 * 6);
    assert!(s.starts_with("d1,cl,group,profile,lambda1,lambda2,srmc1,srmc2,profit_lrmc,profit_srmc,affordable,boundary\n"));
}

#[test]
fn selftest_is_byte_identical() {
    let a = mcost(&["selftest", "--seed", "7", "--n", "150"]);
    let b = mcost(&["selftest", "--seed", "7", "--n", "150"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("PASS\n"));
}

#[test]
fn selftest_rejects_zero() {
    assert_eq!(mcost(&["selftest", "--n", "0"]).status.code(), Some(1));
}

#[test]
fn dump_tables_lists_all_groups() {
    let o = mcost(&["dump-tables"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 42);
    assert!(s.starts_with("group,cluster,peak,conditions,"));
}

#[test]
fn bad_tolerance_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_mcost"))
        .args(["dump-tables"])
        .env("LRMC_TOL_FEAS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_verb() {
    assert_eq!(mcost(&["plot"]).status.code(), Some(1));
}
