use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cl-decohere")).args(args).output().unwrap()
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn lists_presets() {
    let out = bin(&["list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for i in 1..=8 {
        assert!(text.contains(&format!("fig{i}")), "{text}");
    }
}

#[test]
fn selftest_passes() {
    let out = bin(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["fig9", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "kind = arrival\ngamma = -1\n").unwrap();
    let out = bin(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = bin(&["run", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = bin(&["fig2", "--jobs", "1", "--out", a.path().to_str().unwrap()]);
    let rb = bin(&["fig2", "--jobs", "2", "--out", b.path().to_str().unwrap()]);
    assert!(ra.status.success() && rb.status.success());
    let (x, y) = (csv_bytes(a.path()), csv_bytes(b.path()));
    assert!(!x.is_empty());
    assert_eq!(x, y);
    assert!(a.path().join("manifest.json").exists());
}
