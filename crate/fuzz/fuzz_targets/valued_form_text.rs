#![no_main]
use cs3_core::coframe::ValuedForm;
use cs3_core::scalar::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(form) = ValuedForm::<Rational>::from_text(text) {
        let again = ValuedForm::<Rational>::from_text(&form.to_text()).expect("written forms parse");
        assert_eq!(form, again);
    }
});
