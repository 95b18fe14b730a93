#![no_main]
use libfuzzer_sys::fuzz_target;

use spicy_core::action::GroupWord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = GroupWord::parse(text) {
        assert_eq!(GroupWord::parse(&w.to_string()).expect("display parses"), w);
        assert!(w.concat(&w.inverse()).is_identity());
    }
});
