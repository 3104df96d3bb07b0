use std::path::Path;
use std::process::{Command, Output};

fn htforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htforge")).args(args).current_dir(dir).output().unwrap()
}

fn synth_small(dir: &Path, g: &str, h: &str) -> Output {
    htforge(&["synth", "--g", g, "--h", h, "--kmax", "2", "--wlen", "2", "--window", "3", "--out", "cert.txt"], dir)
}

#[test]
fn synth_then_verify_oracle_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = synth_small(dir.path(), "c2", "c3");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("cert.txt")).unwrap();
    assert!(text.starts_with("htforge-certificate 1"));

    let v = htforge(&["verify", "cert.txt"], dir.path());
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains("witnesses verified"));

    let o = htforge(&["oracle", "cert.txt", "--k", "1", "--window", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));

    let d = htforge(&["dot", "cert.txt", "--radius", "1"], dir.path());
    assert_eq!(d.status.code(), Some(0));
    let dot = String::from_utf8_lossy(&d.stdout);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("g:1"));
}

#[test]
fn infinite_factors_use_three_syllable_words() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(synth_small(dir.path(), "z", "z").status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("cert.txt")).unwrap();
    assert!(text.contains("[SIGMA]"));
    let v = htforge(&["verify", "cert.txt"], dir.path());
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn gate_rejection_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = synth_small(dir.path(), "c2", "c2");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinite dihedral"));
    assert!(!dir.path().join("cert.txt").exists());
    let out = synth_small(dir.path(), "c2", "z");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(synth_small(dir.path(), "c2", "c3").status.code(), Some(0));
    let path = dir.path().join("cert.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let line = text.lines().find(|l| l.starts_with("FAITH ")).unwrap();
    let fields: Vec<&str> = line.split(' ').collect();
    // Claim the word fixes its base point.
    let tampered = text.replacen(line, &format!("{} {} {} {}", fields[0], fields[1], fields[2], fields[2]), 1);
    std::fs::write(&path, tampered).unwrap();
    let v = htforge(&["verify", "cert.txt"], dir.path());
    assert_eq!(v.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&v.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("FAIL")).count(), 1, "{stdout}");
}

#[test]
fn usage_errors_and_step_budget() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(htforge(&["synth", "--g", "c2"], dir.path()).status.code(), Some(1));
    assert_eq!(htforge(&["verify", "missing.txt"], dir.path()).status.code(), Some(1));
    assert_eq!(htforge(&["synth", "--g", "q", "--h", "c3"], dir.path()).status.code(), Some(1));
    let out = htforge(
        &[
            "synth", "--g", "c2", "--h", "c3", "--kmax", "2", "--window", "3", "--wlen", "2", "--budget", "0", "--out",
            "c.txt",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}
