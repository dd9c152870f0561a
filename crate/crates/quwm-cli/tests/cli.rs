//! CLI behavior: file round trips, exit codes, mutation detection.

use std::path::Path;
use std::process::Output;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quwm")
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    std::process::Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn family_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "d-frames", "--d", "6"]);
    assert!(out.status.success());
    let path = dir.path().join("d-frames-d6.family.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let family = quwm::io::read_family(&text).unwrap();
    assert_eq!(quwm::io::write_family(&family), text);
}

#[test]
fn verify_rejects_a_flipped_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "binary-mquwm", "--m", "3"]);
    assert!(out.status.success());
    let path = dir.path().join("binary-mquwm-m3.family.json");
    let mut file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut file["matrices"][0][0][0];
    *entry = serde_json::json!(-entry.as_i64().unwrap());
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();

    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("NonDiagonalProduct"), "stderr: {stderr}");
}

#[test]
fn verify_accepts_derived_family_at_muwm_params() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["construct", "binary-mquwm", "--m", "3"]).status.success());
    let fam = dir.path().join("binary-mquwm-m3.family.json");
    let derived = dir.path().join("derived.family.json");
    let out = run(&[
        "derive-muwm",
        fam.to_str().unwrap(),
        "--out",
        derived.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", derived.to_str().unwrap(), "--params", "8,4,4,4"]);
    assert!(out.status.success());
}

#[test]
fn decompose_emits_referencing_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("e7.roots.txt");
    let dec_path = dir.path().join("e7.decomposition.json");
    let out = run(&[
        "decompose",
        "--family",
        "E7",
        "--frame-size",
        "7",
        "--out",
        dec_path.to_str().unwrap(),
        "--out-code",
        code_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let code = quwm::io::read_code(&std::fs::read_to_string(&code_path).unwrap()).unwrap();
    let decomp =
        quwm::io::read_decomposition(&std::fs::read_to_string(&dec_path).unwrap()).unwrap();
    assert_eq!(decomp.parts.len(), 9);
    decomp.validate(&code).unwrap();
}

#[test]
fn decompose_max_reports_exhaustion_for_e6() {
    let out = run(&["decompose", "--family", "E6", "--frame-size", "6", "--max"]);
    assert!(out.status.success());
    let cert: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(cert["kind"], "exhaustion");
    assert_eq!(cert["payload"]["count"], 0);
    assert_eq!(cert["payload"]["clique_bound"], 4);
}

#[test]
fn roots_dump_has_240_e8_roots() {
    let out = run(&["roots", "--family", "E8"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "8 8 240");
    assert_eq!(lines.count(), 240);
}

#[test]
fn screen_unknown_when_no_rule_fires() {
    let out = run(&["screen", "8", "8", "16", "--size", "8"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("UNKNOWN"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bound", "nope", "--d", "8"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--d", "2..3"]).status.code(), Some(2));
}

#[test]
fn weight4_rows_without_witness_emit_empty_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "weight4", "--d", "5"]);
    assert!(out.status.success());
    let family = quwm::io::read_family(
        &std::fs::read_to_string(dir.path().join("weight4-d5.family.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(family.size(), 0);
}

#[test]
fn node_budget_exhaustion_exits_4() {
    let out = run(&["decompose", "--family", "E8", "--frame-size", "8", "--node-budget", "2"]);
    assert_eq!(out.status.code(), Some(4), "budget exhaustion is a hard error, distinct from nonexistence");
}

#[test]
fn every_construction_output_passes_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["construct", "binary-mquwm", "--m", "3"], "binary-mquwm-m3"),
        (&["construct", "z4-mquwm", "--m", "2"], "z4-mquwm-m2"),
        (&["construct", "d-frames", "--d", "6", "--strict-angles"], "d-frames-d6"),
        (&["construct", "weight4", "--d", "7"], "weight4-d7"),
    ];
    for (args, label) in cases {
        let out = run_in(dir.path(), args);
        assert!(out.status.success(), "{label}: {}", String::from_utf8_lossy(&out.stderr));
        let family = dir.path().join(format!("{label}.family.json"));
        let verify = run(&["verify", family.to_str().unwrap()]);
        assert!(verify.status.success(), "{label} failed verify");
        assert!(dir.path().join(format!("{label}.cert.json")).exists());
    }
}

#[test]
fn workers_flag_does_not_change_results() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    assert!(run_in(dir1.path(), &["--workers", "1", "construct", "binary-mquwm", "--m", "3"]).status.success());
    assert!(run_in(dir2.path(), &["--workers", "4", "construct", "binary-mquwm", "--m", "3"]).status.success());
    let a = std::fs::read_to_string(dir1.path().join("binary-mquwm-m3.family.json")).unwrap();
    let b = std::fs::read_to_string(dir2.path().join("binary-mquwm-m3.family.json")).unwrap();
    assert_eq!(a, b);
}
