#![no_main]

use libfuzzer_sys::fuzz_target;
use whistle::{validate, ProblemSpec, Scheme};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(scheme) = Scheme::from_json_str(text) else { return };
    // validating against a small fixed spec must never panic
    let spec = ProblemSpec::from_json_str(r#"{"classes":[{"time":"1","count":1},{"time":"2","count":1}]}"#).unwrap();
    let _ = validate(&spec, &scheme);
});
