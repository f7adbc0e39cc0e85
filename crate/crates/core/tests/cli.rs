use std::process::Command;

use sfcordic::cli::{execute, Cli};
use clap::Parser;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfcordic"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["list-variants"]).0, 0);
    let (code, _, err) = run(&["table", "--layout", "bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("--layout"));
    let (code, _, err) = run(&["compute", "--theta", "0", "--iterations", "x"]);
    assert_eq!(code, 2);
    assert!(err.contains("--iterations"));
    assert_eq!(run(&["simulate", "--theta", "0", "--stages", "7"]).0, 2);
    // range errors are domain errors
    let (code, _, err) = run(&["compute", "--theta", "0.3", "--iterations", "40"]);
    assert_eq!(code, 1);
    assert!(err.contains("iteration"));
    assert_eq!(run(&["decompose", "--theta", "2"]).0, 1);
    assert_eq!(run(&["simulate", "--theta", "1.2"]).0, 1);
}

#[test]
fn binary_output_equals_library_output() {
    for args in [
        vec!["compute", "--theta", "0.7", "--variant", "proposed-o4", "--iterations", "5"],
        vec!["compute", "--theta", "-2.5", "--fixed"],
        vec!["decompose", "--theta", "0.2", "--steps", "6"],
        vec!["simulate", "--theta", "0.3", "--stages", "3"],
        vec!["rom-dump"],
        vec!["list-variants"],
        vec!["table", "--layout", "orders", "--samples", "64"],
    ] {
        let (code, stdout, _) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        let cli = Cli::try_parse_from(std::iter::once("sfcordic").chain(args.iter().copied())).unwrap();
        assert_eq!(stdout, execute(&cli).unwrap(), "{args:?}");
    }
}

#[test]
fn rom_dump_format() {
    let (code, out, _) = run(&["rom-dump"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 32);
    assert_eq!(lines[0], "3243F6A8");
    assert_eq!(lines[24], "0000003F");
    assert_eq!(lines[31], "00000000");
    assert!(lines.iter().all(|l| l.len() == 8 && l.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_lowercase())));
}

#[test]
fn simulate_trace_rows_equal_latency() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (code, out, _) = run(&["simulate", "--theta", "0.3", "--stages", "4", "--trace", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("latency    6"));
    let trace = std::fs::read_to_string(&path).unwrap();
    assert_eq!(trace.lines().count() - 1, 6);
}

#[test]
fn curve_and_table_files() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.csv");
    let (code, out, _) = run(&["curve", "--function", "cos", "--samples", "9", "--out", curve.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&curve).unwrap();
    assert_eq!(csv.lines().next(), Some("theta,approx,reference,difference"));
    assert_eq!(csv.lines().count(), 10);

    let (code, text, _) = run(&["table", "--layout", "methods-cos", "--samples", "1024"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 5);
}
