#![no_main]
use libfuzzer_sys::fuzz_target;
use qbv_core::psi::{tau_bracket, MultiIndex};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(i) = text.parse::<MultiIndex>() {
        assert_eq!(i.to_string().parse::<MultiIndex>().unwrap(), i);
        let _ = tau_bracket(&i);
    }
});
