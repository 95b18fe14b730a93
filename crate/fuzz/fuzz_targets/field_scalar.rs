#![no_main]
use libfuzzer_sys::fuzz_target;

use spicy_core::FieldSpec;

// Input is `<field>\n<scalar>`, e.g. `Fp:7\n-3/4`.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (field_text, scalar_text) = text.split_once('\n').unwrap_or((text, "1"));
    let Ok(field) = field_text.parse::<FieldSpec>() else {
        return;
    };
    assert_eq!(field.to_string().parse::<FieldSpec>().expect("display parses"), field);
    if let Ok(s) = field.parse_scalar(scalar_text) {
        assert_eq!(field.parse_scalar(&s.to_string()).expect("display parses"), s);
    }
});
