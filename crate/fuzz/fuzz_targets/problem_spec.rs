#![no_main]

use libfuzzer_sys::fuzz_target;
use whistle::ProblemSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = ProblemSpec::from_json_str(text) {
        let again = ProblemSpec::from_json_str(&spec.to_json_string()).expect("round trip");
        assert_eq!(again, spec);
    }
});
