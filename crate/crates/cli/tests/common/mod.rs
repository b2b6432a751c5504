#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mpinv_cli::{Command, Flags, JobSpec};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub command: Command,
    pub flags: Flags,
    pub exit_code: u8,
}

pub struct Golden {
    pub dir: PathBuf,
    pub case: Case,
    pub job: JobSpec,
    pub expected: PathBuf,
}

impl Golden {
    pub fn name(&self) -> String {
        self.dir
            .strip_prefix(golden_root())
            .unwrap_or(&self.dir)
            .display()
            .to_string()
    }
}

pub fn golden_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn goldens() -> Vec<Golden> {
    let mut dirs = Vec::new();
    for cmd in std::fs::read_dir(golden_root()).unwrap() {
        for case in std::fs::read_dir(cmd.unwrap().path()).unwrap() {
            let dir = case.unwrap().path();
            if dir.join("job.json").exists() {
                dirs.push(dir);
            }
        }
    }
    dirs.sort();
    dirs.into_iter()
        .map(|dir| {
            let text = std::fs::read_to_string(dir.join("job.json")).unwrap();
            let case: Case = serde_json::from_str(&text).unwrap();
            let input = dir.join("input.json");
            let job = JobSpec {
                command: case.command,
                input: input.exists().then_some(input),
                flags: case.flags.clone(),
            };
            let ext = if case.command == Command::ReportTable {
                "txt"
            } else {
                "json"
            };
            let expected = dir.join(format!("expected.{ext}"));
            Golden {
                dir,
                case,
                job,
                expected,
            }
        })
        .collect()
}
