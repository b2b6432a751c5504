//! First byte picks the command, the rest is the input document.
#![no_main]

use libfuzzer_sys::fuzz_target;
use mpinv_cli::{run, Command, Flags, Options};

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let command = Command::ALL[usize::from(sel) % Command::ALL.len()];
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let blocks = match command {
        Command::Sl2Complete | Command::MpElement | Command::JordanMp => Some(vec![1, 1]),
        _ => None,
    };
    let flags = Flags {
        blocks,
        ..Flags::default()
    };
    let Ok(opts) = Options::resolve(command, &flags) else {
        return;
    };
    let _ = run(command, Some(text), &opts);
});
