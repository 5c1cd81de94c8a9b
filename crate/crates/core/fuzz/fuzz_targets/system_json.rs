#![no_main]

use isoprod_core::ramification::GeneratorSystem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&s, rest)) = data.split_first() else { return };
    let s = usize::from(s % 6);
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(sys) = GeneratorSystem::from_json(s, text) {
            let again = GeneratorSystem::from_json(s, &sys.to_json()).unwrap();
            assert_eq!(again.to_json(), sys.to_json());
        }
    }
});
