#![no_main]
use cs3_core::poly::PolyForm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(form) = PolyForm::from_text(text) {
        let again = PolyForm::from_text(&form.to_text()).expect("written forms parse");
        assert_eq!(form, again);
    }
});
