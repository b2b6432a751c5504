//! Replays the checked-in fuzz corpus through the same entry points as the fuzz targets.

use std::path::{Path, PathBuf};

use mpinv_cli::{parse_blocks, parse_document, reverify, run, Command, Flags, Options};

fn corpus(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus for {target}");
    files
}

#[test]
fn job_input_seeds() {
    let mut accepted = 0;
    for path in corpus("job_input") {
        let data = std::fs::read(&path).unwrap();
        let (&sel, rest) = data.split_first().unwrap();
        let command = Command::ALL[usize::from(sel) % Command::ALL.len()];
        let blocks = match command {
            Command::Sl2Complete | Command::MpElement | Command::JordanMp => Some(vec![1, 1]),
            _ => None,
        };
        let opts = Options::resolve(
            command,
            &Flags {
                blocks,
                ..Flags::default()
            },
        )
        .unwrap();
        if run(command, Some(std::str::from_utf8(rest).unwrap()), &opts).is_ok() {
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn output_document_seeds_reverify() {
    for path in corpus("output_document") {
        let text = std::fs::read_to_string(&path).unwrap();
        parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let r = reverify(&text).unwrap();
        assert!(r.identical, "{}", path.display());
    }
}

#[test]
fn blocks_flag_seeds() {
    let results: Vec<bool> = corpus("blocks_flag")
        .iter()
        .map(|p| parse_blocks(&std::fs::read_to_string(p).unwrap()).is_ok())
        .collect();
    assert!(results.contains(&true) && results.contains(&false));
}

#[test]
fn job_flags_seeds() {
    for path in corpus("job_flags") {
        let flags: Flags = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(
            Command::ALL.iter().any(|&c| Options::resolve(c, &flags).is_ok()),
            "{}",
            path.display()
        );
    }
}
