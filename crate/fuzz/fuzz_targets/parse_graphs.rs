#![no_main]
use libfuzzer_sys::fuzz_target;
use qbv_core::feyn::{graphs_to_text, parse_graphs};

// Cache files are read with this parser, so any text must be rejected cleanly.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(gs) = parse_graphs(text) {
        let again = parse_graphs(&graphs_to_text(&gs)).expect("own output parses");
        assert_eq!(again, gs);
    }
});
