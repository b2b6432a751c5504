//! Flags object of a job file, resolved against every command.
#![no_main]

use libfuzzer_sys::fuzz_target;
use mpinv_cli::{Command, Flags, Options};

fuzz_target!(|text: &str| {
    let Ok(flags) = serde_json::from_str::<Flags>(text) else {
        return;
    };
    for command in Command::ALL {
        if let Ok(opts) = Options::resolve(command, &flags) {
            let _ = opts.tolerance();
        }
    }
});
