#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .output()
        .expect("failed to spawn qgame")
}

pub fn qgame_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to spawn qgame")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

/// Invocations covering every subcommand; `{out}` is replaced by an output path.
pub const SUBCOMMAND_RUNS: [&[&str]; 6] = [
    &["derive-kraus", "--t", "0.7", "--xi", "1.3", "--levels", "3", "--out", "{out}"],
    &["weights", "--gamma-a", "0.3", "--gamma-b", "0.6", "--out", "{out}"],
    &["surface", "--step", "0.1", "--out", "{out}"],
    &["surface", "--step", "0.25", "--format", "json", "--out", "{out}"],
    &["nash", "--gamma-a", "1", "--gamma-b", "0.5", "--step", "0.05", "--out", "{out}"],
    &["reproduce-figures", "--step", "0.1", "--out", "{out}"],
];

/// Concatenated bytes of a file or of every file in a directory, sorted by name.
pub fn snapshot(path: &Path) -> Vec<u8> {
    if path.is_dir() {
        let mut entries: Vec<_> = std::fs::read_dir(path)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        let mut bytes = Vec::new();
        for e in entries {
            bytes.extend(e.file_name().unwrap().to_string_lossy().as_bytes());
            bytes.extend(std::fs::read(&e).unwrap());
        }
        bytes
    } else {
        std::fs::read(path).unwrap()
    }
}

/// Runs `args` twice into fresh locations and reports whether files and stdout match.
pub fn rerun_is_identical(args: &[&str]) -> bool {
    let dir = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    for run in 0..2 {
        let target = dir.path().join(format!("run{run}"));
        let target_s = target.to_string_lossy().into_owned();
        let argv: Vec<&str> = args
            .iter()
            .map(|a| if *a == "{out}" { target_s.as_str() } else { a })
            .collect();
        let out = qgame(&argv);
        let printed = stdout(&out).replace(&target_s, "{out}");
        results.push((code(&out), printed, snapshot(&target)));
    }
    results[0] == results[1]
}
