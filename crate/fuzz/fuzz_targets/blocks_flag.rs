#![no_main]

use libfuzzer_sys::fuzz_target;
use mpinv_cli::parse_blocks;

fuzz_target!(|text: &str| {
    if let Ok(blocks) = parse_blocks(text) {
        assert!(!blocks.is_empty());
        assert!(blocks.iter().all(|&b| b > 0));
    }
});
