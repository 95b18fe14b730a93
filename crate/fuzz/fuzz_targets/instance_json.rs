#![no_main]
use libfuzzer_sys::fuzz_target;

use spicy_core::format::{parse_instance, write_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(instance) = parse_instance(text, None) else {
        return;
    };
    let written = write_instance(&instance);
    let again = parse_instance(&written, None).expect("canonical output parses");
    assert_eq!(write_instance(&again), written);
});
