use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use mahler_forge::checker::{verify, Report, Suite};
use mahler_forge::log::Construction;

const BIN: &str = env!("CARGO_BIN_EXE_mahler-forge");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Fixture {
    _dir: tempfile::TempDir,
    log: PathBuf,
}

/// A two-stage J0 log shared by the tests of this file.
fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("j0.json");
        let o = run(&["construct", "--stages", "2", "--mode", "J0", "--out", log.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        Fixture { _dir: dir, log }
    })
}

fn log() -> &'static str {
    fixture().log.to_str().unwrap()
}

fn write_tampered(dir: &Path, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(log()).unwrap()).unwrap();
    edit(&mut v);
    let p = dir.join("tampered.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

#[test]
fn verify_report_matches_in_memory_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", log(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let from_cli: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let c = Construction::load(&fixture().log).unwrap();
    let in_memory = verify(&c, &Suite::ALL);
    assert_eq!(from_cli, in_memory);
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("again.json");
    let o = run(&["construct", "--stages", "2", "--mode", "J0", "--out", again.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&again).unwrap(), std::fs::read(log()).unwrap());
}

#[test]
fn suite_flag_restricts_checks() {
    let o = run(&["verify", log(), "--suite", "rouche"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.contains("rouche")), "{text}");
}

#[test]
fn tampered_log_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tampered(dir.path(), |v| {
        v["stages"][1]["pairs"][0]["count_after"]["count"] = serde_json::json!(7);
    });
    let o = run(&["verify", p.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn malformed_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", bad.to_str().unwrap()])), 3);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["verify", missing.to_str().unwrap()])), 3);
    let tagged = write_tampered(dir.path(), |v| v["format"] = serde_json::json!("other"));
    assert_eq!(code(&run(&["verify", tagged.to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["eval", log(), "--z", "1+"])), 3);
    assert_eq!(code(&run(&["construct", "--mode", "K3"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
}

#[test]
fn single_stage_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.json");
    let o = run(&["construct", "--stages", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(!out.exists());
}

#[test]
fn eval_at_origin_is_exact_zero() {
    let o = run(&["eval", log(), "--z", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("f^(0)(0) = 0 ± 0"), "{}", stdout(&o));
}

#[test]
fn eval_json_is_certified_value() {
    let o = run(&["eval", log(), "--z", "1/2+1/3*i", "--deriv", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v: mahler_forge::evaluator::CertifiedValue = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.derivative, 1);
    assert_eq!(v.stages, 2);
}

#[test]
fn eval_beyond_control_exits_two() {
    // two stages control the tail only for max(1, R) < 3
    assert_eq!(code(&run(&["eval", log(), "--z", "3"])), 2);
    assert_eq!(code(&run(&["eval", log(), "--z", "1", "--radius", "1/2"])), 2);
    assert_eq!(code(&run(&["eval", log(), "--z", "1", "--radius", "2"])), 0);
}

#[test]
fn targets_prints_schedule() {
    let o = run(&["targets", "--count", "3"]);
    assert_eq!(code(&o), 0);
    let s = mahler_forge::targets::TargetSchedule::from_json(&stdout(&o)).unwrap();
    assert_eq!(s.len(), 3);
    assert!(s.validate().is_empty());
}
