//! The `ogw-loc` binary: exit codes, output formats, determinism and the cache.

use std::path::Path;
use std::process::{Command, Output};

fn ogw_loc(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ogw-loc"))
        .env("OGW_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn welschinger_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = ogw_loc(dir.path(), &["welschinger", "--k", "2", "--l", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "1");
    assert_eq!(v["route"], "diagrams");
}

#[test]
fn relation_check_text() {
    let dir = tempfile::tempdir().unwrap();
    let o = ogw_loc(dir.path(), &["--format", "text", "relation-check", "--m-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OK: 8/8 vanish");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let invalid = ogw_loc(dir.path(), &["ogw", "--m", "1", "--k", "2", "--lvec", "0,0,0", "--beta", "2"]);
    assert_eq!(invalid.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("invalid key"));
    let bad_d = ogw_loc(dir.path(), &["correlator", "--m", "1", "--a", "1", "--d", "1/3", "--q-cap", "1"]);
    assert_eq!(bad_d.status.code(), Some(1));
    let usage = ogw_loc(dir.path(), &["ogw", "--beta"]);
    assert_ne!(usage.status.code(), Some(0));
    assert!(!usage.stderr.is_empty());
}

#[test]
fn csv_table_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = ogw_loc(dir.path(), &["--format", "csv", "--no-timing", "welschinger-table", "--max-total", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,l,beta,value,route,seconds");
    assert!(lines.contains(&"8,0,3,8,diagrams,"));
    assert!(lines.contains(&"4,2,3,4,diagrams,"));
}

#[test]
fn reports_are_deterministic_and_survive_cache_loss() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-timing", "ogw", "--m", "2", "--k", "3", "--lvec", "0,0,0,0,0", "--beta", "0"];
    let cold = stdout(&ogw_loc(dir.path(), &args));
    let warm = stdout(&ogw_loc(dir.path(), &["--jobs", "1"].iter().chain(&args).copied().collect::<Vec<_>>()));
    assert_eq!(cold, warm);
    std::fs::remove_dir_all(dir.path()).unwrap();
    assert_eq!(stdout(&ogw_loc(dir.path(), &args)), cold);
    let v: serde_json::Value = serde_json::from_str(&cold).unwrap();
    assert_eq!(v["expected_degree"], 8);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-timing", "welschinger", "--k", "5", "--l", "0"];
    let first = stdout(&ogw_loc(dir.path(), &args));
    let entries: Vec<_> = walk(dir.path());
    assert!(!entries.is_empty(), "cache written under OGW_CACHE_DIR");
    for e in &entries {
        std::fs::write(e, b"{ not json").unwrap();
    }
    assert_eq!(stdout(&ogw_loc(dir.path(), &args)), first);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn correlator_and_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let o = ogw_loc(dir.path(), &["correlator", "--m", "1", "--a", "1", "--d", "1/2", "--q-cap", "1", "--eta-caps", "0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let constant = v["terms"].as_array().unwrap().iter().find(|t| t["exponents"] == serde_json::json!([0, 0, 0, 0]));
    assert_eq!(constant.unwrap()["value"], "2*l1");
    let b = ogw_loc(dir.path(), &["bracket", "--a-list", "1,1", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(v["value"], "6");
}
