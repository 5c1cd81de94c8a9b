#![no_main]

use isoprod_core::group::GroupElement;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&s, rest)) = data.split_first() else { return };
    let s = usize::from(s % 12);
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(x) = GroupElement::from_hex(s, text) {
            assert_eq!(GroupElement::from_hex(s, &x.to_hex()).unwrap(), x);
        }
    }
});
