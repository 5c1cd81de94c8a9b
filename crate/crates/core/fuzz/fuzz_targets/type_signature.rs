#![no_main]

use isoprod_core::ramification::TypeSignature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(t) = text.parse::<TypeSignature>() {
            assert_eq!(t.to_string().parse::<TypeSignature>().unwrap(), t);
        }
    }
});
