use std::process::{Command, Output};

fn qclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclone")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args = ["sweep", "two-op", "--param", "phi", "--from", "0", "--to", "6.283185307179586", "--steps", "9"];
    let a = qclone(&args);
    let b = qclone(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mc = ["sweep", "two-op", "--param", "phi", "--from", "0", "--to", "1", "--steps", "3", "--mc-samples", "500", "--seed", "9"];
    assert_eq!(qclone(&mc).stdout, qclone(&mc).stdout);
}

#[test]
fn csv_layout() {
    let o = qclone(&["sweep", "bh", "--from", "0", "--to", "90", "--deg", "--steps", "4"]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "theta,phi,F_a,F_b");
    assert_eq!(data.len(), 5);
    for line in &data[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "");
        let f: f64 = cells[2].parse().unwrap();
        assert!((f - 5.0 / 6.0).abs() < 1e-13);
    }
}

#[test]
fn json_output_parses() {
    let o = qclone(&["run", "pc", "--theta", "1.1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metadata"]["machine"], "pc");
    let f = v["rows"][0]["F_a"].as_f64().unwrap();
    assert!((f - (0.5 + 8f64.sqrt().recip())).abs() < 1e-12);
    assert!((v["rows"][0]["F_orig"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qclone-cli-{}.json", std::process::id()));
    let o = qclone(&["optimize-pc", "--z-zero", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["rows"][0]["f0_sq"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-9);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qclone(&["run", "two-op", "--theta", "0.2"]).status.code(), Some(2));
    assert_eq!(qclone(&["run", "warp", "--theta", "0.2"]).status.code(), Some(2));
    assert_eq!(qclone(&["sweep", "bh", "--from", "0", "--to", "1", "--steps", "0"]).status.code(), Some(2));
    assert_eq!(qclone(&["solve-prep", "--coeffs", "1,1,1,1"]).status.code(), Some(2));
    assert_eq!(qclone(&["synth", "--perm", "0,1,2,3,4,5,7,6"]).status.code(), Some(1));
    assert_eq!(qclone(&["synth", "--perm", "7,6,5,4,3,2,1,0"]).status.code(), Some(0));
    assert_eq!(qclone(&["verify", "invariants"]).status.code(), Some(0));
    assert_eq!(qclone(&["constants"]).status.code(), Some(0));
}

#[test]
fn verify_emits_json_lines_with_summary() {
    let o = qclone(&["verify", "table2", "--row", "1"]);
    let text = stdout(&o);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["checks"], 4);
    let failed = summary["failed"].as_u64().unwrap();
    assert_eq!(o.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
