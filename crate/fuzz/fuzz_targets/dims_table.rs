#![no_main]
use libfuzzer_sys::fuzz_target;
use qbv_core::feyn::DimsTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = DimsTable::from_json(text) {
        assert_eq!(DimsTable::from_json(&t.to_json()).unwrap(), t);
    }
});
