#![no_main]

use isoprod_core::group::StructureTensor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(t) = StructureTensor::from_hex(text) {
            assert_eq!(StructureTensor::from_hex(&t.to_hex()).unwrap(), t);
        }
    }
});
