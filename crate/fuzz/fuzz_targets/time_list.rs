#![no_main]

use libfuzzer_sys::fuzz_target;
use whistle::harmonic::{parse_time_list, split_search};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(times) = parse_time_list(text) {
        if times.len() <= 12 {
            let _ = split_search(&times);
        }
    }
});
