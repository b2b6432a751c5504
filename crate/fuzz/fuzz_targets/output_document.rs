#![no_main]

use libfuzzer_sys::fuzz_target;
use mpinv_cli::{parse_document, reverify};

fuzz_target!(|text: &str| {
    if parse_document(text).is_ok() {
        let _ = reverify(text);
    }
});
