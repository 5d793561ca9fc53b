use std::path::Path;
use std::process::Command;

fn truncosc(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_truncosc")).args(args).arg("--out").arg(out).output().expect("run truncosc");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stderr).into_owned())
}

#[test]
fn bad_flags_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    assert_eq!(truncosc(&["--command", "uncertainty", "--steps", "1"], &out).0, 2);
    assert_eq!(truncosc(&["--command", "nonsense"], &out).0, 2);
    assert_eq!(truncosc(&["--command", "density", "--model", "susy-q4", "--family", "l-minus"], &out).0, 2);
    assert_eq!(truncosc(&["--command", "density"], &dir.path().join("missing/u.csv")).0, 2);
    assert!(!out.exists());
}

#[test]
fn divergent_displacement_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = truncosc(&["--command", "density", "--family", "displacement", "--zmax", "1"], &dir.path().join("d.csv"));
    assert_eq!(code, 3, "{err}");
}

#[test]
fn wrong_seeds_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.txt");
    std::fs::write(&seeds, "-4.5 inf\n-2.5 0.3\n").unwrap();
    let report = dir.path().join("report.csv");
    let (code, err) = truncosc(&["--command", "validate", "--seed-config", seeds.to_str().unwrap()], &report);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("wronskian_potential"), "{err}");
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.lines().any(|l| l.contains("wronskian_potential,fail")));
}

#[test]
fn csv_header_carries_the_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = ["--command", "uncertainty", "--zmax", "1", "--steps", "3"];
    assert_eq!(truncosc(&args, &a).0, 0);
    assert_eq!(truncosc(&[&args[..], &["--basis", "80"]].concat(), &b).0, 0);
    let first = |p: &Path| std::fs::read_to_string(p).unwrap().lines().next().unwrap().to_string();
    let (ha, hb) = (first(&a), first(&b));
    assert!(ha.starts_with("# truncosc ") && ha.ends_with("basis=64"), "{ha}");
    assert!(hb.ends_with("basis=80"));
    assert_ne!(ha.split_whitespace().nth(3), hb.split_whitespace().nth(3));
}
