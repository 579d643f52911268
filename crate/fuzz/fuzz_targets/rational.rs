#![no_main]

use libfuzzer_sys::fuzz_target;
use whistle::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<Rational>() {
        let back: Rational = r.to_string().parse().expect("display output parses");
        assert_eq!(back, r);
    }
});
