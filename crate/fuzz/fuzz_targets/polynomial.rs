#![no_main]
use cs3_core::poly::Polynomial;
use libfuzzer_sys::fuzz_target;

// First byte picks the variable count, the rest is the expression.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let nvars = usize::from(n % 10);
    if let Ok(p) = Polynomial::parse(text, nvars) {
        let again = Polynomial::parse(&p.to_string(), nvars).expect("displayed polynomials parse");
        assert_eq!(p, again);
    }
});
