#![no_main]
use cs3_core::invariants::BuiltinExample;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(example) = BuiltinExample::parse(text) {
        assert_eq!(BuiltinExample::parse(&example.to_string()).as_ref(), Ok(&example));
    }
});
