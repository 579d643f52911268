#![no_main]

use libfuzzer_sys::fuzz_target;
use whistle::grid::{matrix_from_csv, matrix_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = matrix_from_csv(text) {
        let again = matrix_from_csv(&matrix_to_csv(&m)).expect("round trip");
        assert_eq!(again, m);
    }
});
