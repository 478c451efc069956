#![no_main]
use cs3_core::scalar::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((q, _)) = parse_rational(text) {
        let (again, _) = parse_rational(&format_rational(&q)).expect("formatted rationals parse");
        assert_eq!(q, again);
    }
});
