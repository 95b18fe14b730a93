#![no_main]
use libfuzzer_sys::fuzz_target;

use spicy_core::format::parse_element;
use spicy_core::models::{build_exterior_model, ModelSpec};
use spicy_core::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (inst, _) = build_exterior_model(&ModelSpec::exterior(3, FieldSpec::Rationals))
        .expect("fixed model builds");
    let module = inst.module();
    if let Ok(e) = parse_element(module, text) {
        let shown = module.format_element(&e);
        assert_eq!(parse_element(module, &shown).expect("formatted element parses"), e);
    }
});
