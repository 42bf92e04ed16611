#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(corpus_dir().join("cases.txt")).unwrap();
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut parts = l.split_whitespace().map(String::from);
            let name = parts.next().unwrap();
            let exit = parts.next().unwrap().parse().unwrap();
            Case {
                name,
                exit,
                args: parts.collect(),
            }
        })
        .collect()
}

pub fn run(args: &[String], emit: &str) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_braidext"))
        .arg("--emit")
        .arg(emit)
        .args(args)
        .current_dir(corpus_dir())
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Machine-readable output of every corpus case, in manifest order.
pub fn corpus_outputs() -> Vec<(String, i32, Vec<u8>)> {
    cases()
        .into_iter()
        .map(|c| {
            let r = run(&c.args, "json");
            (c.name, r.code, r.stdout)
        })
        .collect()
}
